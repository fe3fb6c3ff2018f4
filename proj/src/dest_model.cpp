#include "aiscell/dest_model.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <utility>

#include "aiscell/cell_search.hpp"
#include "aiscell/error.hpp"

namespace aiscell {

namespace {

std::uint64_t count_in(const std::unordered_map<std::string, DestCounters>& table, const std::string& key,
                       const std::string& dest) {
  auto it = table.find(key);
  if (it == table.end()) return 0;
  auto jt = it->second.find(dest);
  return jt == it->second.end() ? 0 : jt->second;
}

std::uint64_t count_in(const std::unordered_map<int, DestCounters>& table, int key, const std::string& dest) {
  auto it = table.find(key);
  if (it == table.end()) return 0;
  auto jt = it->second.find(dest);
  return jt == it->second.end() ? 0 : jt->second;
}

double course_alignment(const AisRecord& rec, const Port& port) {
  if (rec.pos == port.pos) return 180.0;
  return angular_diff(bearing_deg(rec.pos, port.pos), rec.course);
}

// true when `a` should rank ahead of `b` under one tie-break criterion,
// false when behind; nullopt when the criterion does not separate them
std::optional<bool> tie_break(TieBreak t, const std::string& a, const std::string& b, const AisRecord& rec,
                              const PortRegistry& ports, const DestGridModel& model) {
  switch (t) {
    case TieBreak::GeoCourse: {
      const double da = course_alignment(rec, *ports.find(a));
      const double db = course_alignment(rec, *ports.find(b));
      if (da != db) return da < db;
      return std::nullopt;
    }
    case TieBreak::GeoDistance: {
      const double da = haversine_nm(rec.pos, ports.find(a)->pos);
      const double db = haversine_nm(rec.pos, ports.find(b)->pos);
      if (da != db) return da < db;
      return std::nullopt;
    }
    case TieBreak::DepartureFreq: {
      const auto ca = count_in(model.departure_totals, rec.departure_port, a);
      const auto cb = count_in(model.departure_totals, rec.departure_port, b);
      if (ca != cb) return ca > cb;
      return std::nullopt;
    }
    case TieBreak::TypeFreq: {
      const auto ca = count_in(model.type_totals, rec.ship_type, a);
      const auto cb = count_in(model.type_totals, rec.ship_type, b);
      if (ca != cb) return ca > cb;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

const DestCellModel* DestGridModel::cell(CellId id) const {
  auto it = cells.find(cell_key(id));
  return it == cells.end() ? nullptr : &it->second;
}

bool train_destination(DestGridModel& model, const AisRecord& rec, double speed_bucket) {
  if (!rec.label_destination) throw Error(Errc::MissingLabel, "record of ship " + rec.ship_id);
  if (!model.grid.contains(rec.pos)) {
    ++model.skipped;
    return false;
  }
  const std::string& dest = *rec.label_destination;
  DestCellModel& cell = model.cells[cell_key(cell_of(rec.pos, model.grid))];
  DimTables& dims = cell.by_course[course_key_of(rec.course)];
  ++dims.by_type[rec.ship_type][dest];
  ++dims.by_speed[speed_bucket_of(rec.speed, speed_bucket)][dest];
  ++dims.by_departure[rec.departure_port][dest];
  ++cell.trained_count;

  ++model.departure_totals[rec.departure_port][dest];
  ++model.type_totals[rec.ship_type][dest];
  ++model.destination_totals[dest];
  ++model.trained;
  return true;
}

std::optional<CellId> find_trained_cell(const DestGridModel& model, CellId cell, double course,
                                        int max_ring_radius) {
  return nearest_trained_cell(
      model.grid, cell, course, max_ring_radius,
      [&](CellId c) { return model.cell(c) != nullptr; },
      [&](CellId c) { return model.cell(c)->trained_count; });
}

std::vector<const DestCounters*> candidate_sets(const DestCellModel& cell, const AisRecord& rec,
                                                double tolerance, double speed_bucket) {
  std::vector<std::pair<double, int>> keys;
  for (const auto& [key, dims] : cell.by_course) {
    const double d = angular_diff(key, rec.course);
    if (d <= tolerance) keys.emplace_back(d, key);
  }
  std::sort(keys.begin(), keys.end());

  const int bucket = speed_bucket_of(rec.speed, speed_bucket);
  std::vector<const DestCounters*> out;
  for (const auto& [d, key] : keys) {
    const DimTables& dims = cell.by_course.at(key);
    if (auto it = dims.by_type.find(rec.ship_type); it != dims.by_type.end()) out.push_back(&it->second);
    if (auto it = dims.by_speed.find(bucket); it != dims.by_speed.end()) out.push_back(&it->second);
    if (auto it = dims.by_departure.find(rec.departure_port); it != dims.by_departure.end())
      out.push_back(&it->second);
  }
  return out;
}

std::vector<const DestCounters*> all_counter_sets(const DestCellModel& cell) {
  std::vector<int> keys;
  keys.reserve(cell.by_course.size());
  for (const auto& [key, dims] : cell.by_course) keys.push_back(key);
  std::sort(keys.begin(), keys.end());

  std::vector<const DestCounters*> out;
  for (int key : keys) {
    const DimTables& dims = cell.by_course.at(key);
    for (const auto& [_, c] : dims.by_type) out.push_back(&c);
    for (const auto& [_, c] : dims.by_speed) out.push_back(&c);
    for (const auto& [_, c] : dims.by_departure) out.push_back(&c);
  }
  return out;
}

std::optional<std::string> aggregate(std::span<const DestCounters* const> candidates, const AisRecord& rec,
                                     const PortRegistry& ports, const DestGridModel& model,
                                     const EngineConfig& cfg) {
  if (candidates.empty()) return std::nullopt;
  std::map<std::string, std::uint64_t> sums;
  for (const DestCounters* set : candidates)
    for (const auto& [dest, n] : *set) sums[dest] += n;

  std::uint64_t best = 0;
  std::vector<std::string> leaders;
  for (const auto& [dest, n] : sums) {
    if (!ports.contains(dest)) throw Error(Errc::UnknownPort, dest);
    if (n > best) {
      best = n;
      leaders.clear();
    }
    if (n == best) leaders.push_back(dest);
  }
  if (leaders.empty()) return std::nullopt;

  // leaders arrive sorted by name, so a stable pass keeps the
  // lexicographic order as the last resort
  auto ahead = [&](const std::string& a, const std::string& b) {
    for (TieBreak t : cfg.tie_break_order)
      if (auto r = tie_break(t, a, b, rec, ports, model)) return *r;
    return false;
  };
  return *std::min_element(leaders.begin(), leaders.end(), ahead);
}

const Port& port_by_course(const AisRecord& rec, const PortRegistry& ports) {
  if (ports.empty()) throw Error(Errc::NoModel, "empty port registry");
  const Port* best = nullptr;
  double best_diff = 0.0, best_dist = 0.0;
  for (const Port& p : ports.ports()) {
    const double diff = course_alignment(rec, p);
    const double dist = haversine_nm(rec.pos, p.pos);
    if (!best || diff < best_diff || (diff == best_diff && (dist < best_dist || (dist == best_dist && p.name < best->name)))) {
      best = &p;
      best_diff = diff;
      best_dist = dist;
    }
  }
  return *best;
}

DestPrediction predict_destination_raw(const DestGridModel& model, const PortRegistry& ports,
                                       const AisRecord& rec, const EngineConfig& cfg) {
  if (ports.empty()) throw Error(Errc::NoModel, "empty port registry");
  if (model.trained == 0) throw Error(Errc::NoModel, "destination model holds no trained records");

  std::optional<CellId> resolved;
  if (model.grid.contains(rec.pos))
    resolved = find_trained_cell(model, cell_of(rec.pos, model.grid), rec.course, cfg.max_ring_radius);

  if (resolved) {
    const DestCellModel& cell = *model.cell(*resolved);
    const auto cands = candidate_sets(cell, rec, cfg.course_tolerance, cfg.speed_bucket);
    if (auto best = aggregate(cands, rec, ports, model, cfg)) return {*best, DestSource::Candidates, resolved};
    const auto everything = all_counter_sets(cell);
    if (auto best = aggregate(everything, rec, ports, model, cfg)) return {*best, DestSource::WholeCell, resolved};
  }

  if (auto it = model.departure_totals.find(rec.departure_port); it != model.departure_totals.end()) {
    const DestCounters* set = &it->second;
    if (auto best = aggregate(std::span(&set, 1), rec, ports, model, cfg))
      return {*best, DestSource::Departure, resolved};
  }
  return {port_by_course(rec, ports).name, DestSource::NearestPort, resolved};
}

std::string_view to_string(DestSource s) {
  switch (s) {
    case DestSource::Candidates: return "candidates";
    case DestSource::WholeCell: return "whole_cell";
    case DestSource::Departure: return "departure";
    case DestSource::NearestPort: return "nearest_port";
  }
  return "?";
}

}  // namespace aiscell
