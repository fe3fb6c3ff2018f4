#include "aiscell/eta_model.hpp"

#include <algorithm>
#include <cmath>

#include "aiscell/cell_search.hpp"
#include "aiscell/error.hpp"

namespace aiscell {

void TimeStats::add(const AisRecord& rec, double remaining) {
  ++count;
  mean_remaining += (remaining - mean_remaining) / double(count);
  if (count == 1 || std::fabs(remaining - mean_remaining) < std::fabs(ref_remaining - mean_remaining)) {
    ref_record = rec;
    ref_remaining = remaining;
  }
}

const EtaCellModel* EtaGridModel::cell(CellId id) const {
  auto it = cells.find(cell_key(id));
  return it == cells.end() ? nullptr : &it->second;
}

bool train_arrival(EtaGridModel& model, const AisRecord& rec, double speed_bucket) {
  if (!rec.labeled()) throw Error(Errc::MissingLabel, "record of ship " + rec.ship_id);
  if (*rec.label_arrival < rec.timestamp)
    throw Error(Errc::NegativeRemaining, "record of ship " + rec.ship_id + " at " + std::to_string(rec.timestamp));
  if (!model.grid.contains(rec.pos)) {
    ++model.skipped;
    return false;
  }
  const std::string& dest = *rec.label_destination;
  const double remaining = double(*rec.label_arrival - rec.timestamp);

  EtaCellModel& cell = model.cells[cell_key(cell_of(rec.pos, model.grid))];
  DestTimeTables& tables = cell.by_destination[dest];
  tables.overall.add(rec, remaining);
  tables.by_course[course_key_of(rec.course)].add(rec, remaining);
  tables.by_speed[speed_bucket_of(rec.speed, speed_bucket)].add(rec, remaining);
  tables.by_departure[rec.departure_port].add(rec, remaining);
  ++cell.trained_count;

  model.global[dest].add(rec, remaining);
  if (!model.all_destinations) model.all_destinations.emplace();
  model.all_destinations->add(rec, remaining);
  ++model.trained;
  return true;
}

double adjust_eta(double base, const AisRecord& rec, const AisRecord& ref) {
  if (!(rec.speed > 0.0)) throw Error(Errc::ZeroSpeed, "ship " + rec.ship_id);
  if (rec.pos == ref.pos) return std::max(0.0, base);
  const double hours = haversine_nm(rec.pos, ref.pos) / rec.speed;
  const double seconds = hours * 3600.0;
  const bool ref_ahead = angular_diff(bearing_deg(rec.pos, ref.pos), rec.course) < 90.0;
  return std::max(0.0, ref_ahead ? base + seconds : base - seconds);
}

EtaPrediction predict_arrival(const EtaGridModel& model, const AisRecord& rec, const std::string& dest,
                              const EngineConfig& cfg) {
  const TimeStats* stats = nullptr;
  EtaPrediction out;

  if (model.grid.contains(rec.pos)) {
    // a fine cell is only useful if it has seen ships bound for `dest`
    auto tables_in = [&](CellId c) -> const DestTimeTables* {
      const EtaCellModel* cell = model.cell(c);
      if (!cell) return nullptr;
      auto it = cell->by_destination.find(dest);
      return it == cell->by_destination.end() ? nullptr : &it->second;
    };
    out.cell = nearest_trained_cell(
        model.grid, cell_of(rec.pos, model.grid), rec.course, cfg.max_ring_radius,
        [&](CellId c) { return tables_in(c) != nullptr; },
        [&](CellId c) { return tables_in(c)->overall.count; });
    if (out.cell) {
      const DestTimeTables& tables = *tables_in(*out.cell);
      switch (cfg.eta_dimension) {
        case EtaDimension::Course:
          if (auto it = tables.by_course.find(course_key_of(rec.course)); it != tables.by_course.end())
            stats = &it->second;
          break;
        case EtaDimension::Speed:
          if (auto it = tables.by_speed.find(speed_bucket_of(rec.speed, cfg.speed_bucket));
              it != tables.by_speed.end())
            stats = &it->second;
          break;
        case EtaDimension::Departure:
          if (auto it = tables.by_departure.find(rec.departure_port); it != tables.by_departure.end())
            stats = &it->second;
          break;
      }
      out.source = stats ? EtaSource::Dimension : EtaSource::Destination;
      if (!stats) stats = &tables.overall;
    }
  }

  double remaining = 0.0;
  if (stats) {
    remaining = stats->mean_remaining;
    if (cfg.time_adjustment && rec.speed > kAdjustmentMinSpeed) {
      remaining = adjust_eta(remaining, rec, stats->ref_record);
      out.adjusted = true;
    }
  } else {
    auto it = model.global.find(dest);
    if (it == model.global.end()) throw Error(Errc::NoEtaModel, dest);
    out.source = EtaSource::Global;
    remaining = it->second.mean_remaining;
  }
  out.arrival = rec.timestamp + EpochSeconds(std::llround(std::max(0.0, remaining)));
  return out;
}

std::string_view to_string(EtaSource s) {
  switch (s) {
    case EtaSource::Dimension: return "dimension";
    case EtaSource::Destination: return "destination";
    case EtaSource::Global: return "global";
  }
  return "?";
}

}  // namespace aiscell
