#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "aiscell/geo.hpp"
#include "aiscell/record.hpp"

namespace aiscell {

/// Destination port -> number of learned records.
using DestCounters = std::unordered_map<std::string, std::uint64_t>;

struct DimTables {
  std::unordered_map<int, DestCounters> by_type;
  std::unordered_map<int, DestCounters> by_speed;
  std::unordered_map<std::string, DestCounters> by_departure;

  friend bool operator==(const DimTables&, const DimTables&) = default;
};

struct DestCellModel {
  std::unordered_map<int, DimTables> by_course;
  std::uint64_t trained_count = 0;

  friend bool operator==(const DestCellModel&, const DestCellModel&) = default;
};

/// Sparse coarse-grid model. Besides the per-cell tables it keeps the
/// global frequencies used by tie-breaks and fallbacks.
struct DestGridModel {
  GridSpec grid;
  std::unordered_map<std::uint64_t, DestCellModel> cells;  // keyed by cell_key
  std::unordered_map<std::string, DestCounters> departure_totals;
  std::unordered_map<int, DestCounters> type_totals;
  DestCounters destination_totals;
  std::uint64_t trained = 0;
  std::uint64_t skipped = 0;

  const DestCellModel* cell(CellId id) const;

  friend bool operator==(const DestGridModel&, const DestGridModel&) = default;
};

/// Learns one labeled record: exactly one increment in each of the three
/// dimension tables under the record's course key. Records outside the
/// grid are counted in `skipped` and leave the tables untouched; the return
/// value says whether the record was learned. Throws Error(MissingLabel).
bool train_destination(DestGridModel& model, const AisRecord& rec, double speed_bucket);

std::optional<CellId> find_trained_cell(const DestGridModel& model, CellId cell, double course,
                                        int max_ring_radius);

/// Counter sets of `cell` matching `rec` in some dimension, for all course
/// keys within `tolerance` of the record's course. Ordered by angular
/// distance of the key, then key, then type/speed/departure.
std::vector<const DestCounters*> candidate_sets(const DestCellModel& cell, const AisRecord& rec,
                                                double tolerance, double speed_bucket);

/// Every counter set stored in a cell, regardless of dimension match.
std::vector<const DestCounters*> all_counter_sets(const DestCellModel& cell);

/// Sums counts per destination and returns the maximum; ties follow
/// cfg.tie_break_order and finally the lexicographically smallest name.
/// Returns nullopt for an empty candidate list. Throws Error(UnknownPort).
std::optional<std::string> aggregate(std::span<const DestCounters* const> candidates, const AisRecord& rec,
                                     const PortRegistry& ports, const DestGridModel& model,
                                     const EngineConfig& cfg);

/// Port whose bearing from `rec` best matches its course; distance, then
/// name break ties. Ports at the record's exact position rank last.
const Port& port_by_course(const AisRecord& rec, const PortRegistry& ports);

enum class DestSource {
  Candidates,   // dimension match in the resolved cell
  WholeCell,    // every counter in the resolved cell
  Departure,    // global frequency for the departure port
  NearestPort,  // geometry only
};

struct DestPrediction {
  std::string port;
  DestSource source = DestSource::Candidates;
  std::optional<CellId> cell;
};

/// Full prediction path: resolve a trained cell, match candidates, then
/// fall back to the whole cell, the departure statistics and finally the
/// port best aligned with the course. Throws Error(NoModel) when nothing
/// has been trained or the registry is empty.
DestPrediction predict_destination_raw(const DestGridModel& model, const PortRegistry& ports,
                                       const AisRecord& rec, const EngineConfig& cfg);

std::string_view to_string(DestSource s);

}  // namespace aiscell
