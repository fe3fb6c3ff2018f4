#include "aiscell/engine.hpp"

#include <cmath>
#include <limits>

#include "aiscell/error.hpp"

namespace aiscell {

Engine::Engine(EngineConfig cfg, PortRegistry ports) : cfg_(std::move(cfg)), ports_(std::move(ports)) {
  cfg_.validate();
  dest_.grid = cfg_.dest_grid();
  eta_.grid = cfg_.eta_grid();
}

void Engine::set_config(const EngineConfig& cfg) {
  cfg.validate();
  if (cfg.dest_grid() != dest_.grid || cfg.eta_grid() != eta_.grid)
    throw Error(Errc::InvalidConfig, "grid geometry differs from the trained model");
  cfg_ = cfg;
}

TrainOutcome Engine::train(const AisRecord& rec) {
  TrainOutcome out;
  if (!rec.labeled() || !ports_.contains(*rec.label_destination)) {
    out.rejected = true;
    return out;
  }
  out.dest_trained = train_destination(dest_, rec, cfg_.speed_bucket);
  try {
    out.eta_trained = train_arrival(eta_, rec, cfg_.speed_bucket);
  } catch (const Error& e) {
    if (e.code() != Errc::NegativeRemaining) throw;
    out.rejected = true;
  }
  return out;
}

TrainSummary Engine::train_all(std::span<const AisRecord> records) {
  TrainSummary s;
  const auto skipped_before = dest_.skipped;
  for (const AisRecord& rec : records) {
    const auto o = train(rec);
    ++s.records;
    s.dest_trained += o.dest_trained;
    s.eta_trained += o.eta_trained;
    s.rejected += o.rejected;
  }
  s.skipped_out_of_bounds = dest_.skipped - skipped_before;
  return s;
}

void Engine::close_quiet_trips(double now) {
  // copy: committing mutates the set
  const std::vector<std::string> ships(ships_in_port_.begin(), ships_in_port_.end());
  for (const std::string& ship : ships) {
    TripBuffer& buf = buffers_.at(ship);
    std::optional<TripLabel> label;
    try {
      label = check_trip_end(buf, now, cfg_.quiet_period);
    } catch (const Error& e) {
      if (e.code() != Errc::MissingPrediction) throw;
      buf = TripBuffer{ship, {}, {}, {}, {}};
      ships_in_port_.erase(ship);
      ++discarded_trips_;
      continue;
    }
    if (!label) continue;
    const CommitResult res = commit_trip(*this, buf, *label);
    committed_.push_back(CommittedTrip{ship, *label, res});
    ships_in_port_.erase(ship);
  }
}

Prediction Engine::predict(const AisRecord& rec) {
  if (cfg_.semi_supervised) close_quiet_trips(double(rec.timestamp));

  Prediction p;
  const DestPrediction raw = predict_destination_raw(dest_, ports_, rec, cfg_);
  p.raw_destination = raw.port;
  p.dest_source = raw.source;

  auto [it, inserted] = histories_.try_emplace(rec.ship_id, rec.ship_id, std::size_t(cfg_.robustness_window));
  p.destination = filter_prediction(it->second, raw.port, cfg_.robustness_k);

  try {
    const EtaPrediction eta = predict_arrival(eta_, rec, p.destination, cfg_);
    p.arrival = eta.arrival;
    p.eta_source = eta.source;
  } catch (const Error& e) {
    if (e.code() != Errc::NoEtaModel) throw;
    p.eta_source = EtaSource::Global;
    const double fallback = eta_.all_destinations ? eta_.all_destinations->mean_remaining : 0.0;
    p.arrival = rec.timestamp + EpochSeconds(std::llround(fallback));
  }

  if (cfg_.semi_supervised) {
    TripBuffer& buf = buffers_[rec.ship_id];
    observe(buf, rec, p.destination, ports_);
    if (buf.in_port) ships_in_port_.insert(rec.ship_id);
    else ships_in_port_.erase(rec.ship_id);
  }
  return p;
}

void Engine::finish() {
  if (cfg_.semi_supervised) close_quiet_trips(std::numeric_limits<double>::infinity());
}

void Engine::reset_history(const std::string& ship_id) {
  if (auto it = histories_.find(ship_id); it != histories_.end()) it->second.reset();
}

}  // namespace aiscell
