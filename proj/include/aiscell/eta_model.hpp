#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>

#include "aiscell/geo.hpp"
#include "aiscell/record.hpp"

namespace aiscell {

/// Running statistics of the time left to arrival for one context, plus the
/// reference record whose remaining time is closest to the running mean.
struct TimeStats {
  std::uint64_t count = 0;
  double mean_remaining = 0.0;  // seconds
  AisRecord ref_record;
  double ref_remaining = 0.0;

  /// Folds in one observation. The reference is replaced only when the
  /// new record is strictly closer to the updated mean.
  void add(const AisRecord& rec, double remaining);

  friend bool operator==(const TimeStats&, const TimeStats&) = default;
};

struct DestTimeTables {
  TimeStats overall;
  std::unordered_map<int, TimeStats> by_course;
  std::unordered_map<int, TimeStats> by_speed;
  std::unordered_map<std::string, TimeStats> by_departure;

  friend bool operator==(const DestTimeTables&, const DestTimeTables&) = default;
};

struct EtaCellModel {
  std::unordered_map<std::string, DestTimeTables> by_destination;
  std::uint64_t trained_count = 0;

  friend bool operator==(const EtaCellModel&, const EtaCellModel&) = default;
};

/// Sparse fine-grid arrival-time model with per-destination global stats.
struct EtaGridModel {
  GridSpec grid{30.0, 46.0, -6.0, 36.5, 0.005};
  std::unordered_map<std::uint64_t, EtaCellModel> cells;
  std::unordered_map<std::string, TimeStats> global;
  std::optional<TimeStats> all_destinations;
  std::uint64_t trained = 0;
  std::uint64_t skipped = 0;

  const EtaCellModel* cell(CellId id) const;

  friend bool operator==(const EtaGridModel&, const EtaGridModel&) = default;
};

/// Learns one labeled record. Out-of-grid records only bump `skipped` and
/// return false; the global statistics learn only in-grid records.
/// Throws Error(MissingLabel) or Error(NegativeRemaining).
bool train_arrival(EtaGridModel& model, const AisRecord& rec, double speed_bucket);

/// Shifts `base` by the sailing time between `rec` and `ref`: added when
/// the reference lies ahead of the ship (within 90 degrees of its course),
/// subtracted otherwise. Never negative. Throws Error(ZeroSpeed).
double adjust_eta(double base, const AisRecord& rec, const AisRecord& ref);

/// Speed at or below which time adjustment is skipped.
inline constexpr double kAdjustmentMinSpeed = 0.5;

enum class EtaSource { Dimension, Destination, Global };

struct EtaPrediction {
  EpochSeconds arrival = 0;
  EtaSource source = EtaSource::Global;
  bool adjusted = false;
  std::optional<CellId> cell;
};

/// Predicts the arrival time at `dest`. Throws Error(NoEtaModel) when not
/// even the global statistics know `dest`.
EtaPrediction predict_arrival(const EtaGridModel& model, const AisRecord& rec, const std::string& dest,
                              const EngineConfig& cfg);

std::string_view to_string(EtaSource s);

}  // namespace aiscell
