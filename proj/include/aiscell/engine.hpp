#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "aiscell/dest_model.hpp"
#include "aiscell/eta_model.hpp"
#include "aiscell/record.hpp"
#include "aiscell/robustness.hpp"
#include "aiscell/semi_supervised.hpp"

namespace aiscell {

struct TrainOutcome {
  bool dest_trained = false;
  bool eta_trained = false;
  bool rejected = false;  // label invalid for at least one model
};

struct TrainSummary {
  std::size_t records = 0;
  std::size_t dest_trained = 0;
  std::size_t eta_trained = 0;
  std::size_t skipped_out_of_bounds = 0;
  std::size_t rejected = 0;
};

struct Prediction {
  std::string raw_destination;
  std::string destination;  // after the robustness filter
  EpochSeconds arrival = 0;
  DestSource dest_source = DestSource::Candidates;
  EtaSource eta_source = EtaSource::Global;
};

struct CommittedTrip {
  std::string ship_id;
  TripLabel label;
  CommitResult result;

  friend bool operator==(const CommittedTrip& a, const CommittedTrip& b) {
    return a.ship_id == b.ship_id && a.label == b.label && a.result.records == b.result.records &&
           a.result.dest_trained == b.result.dest_trained && a.result.eta_trained == b.result.eta_trained &&
           a.result.rejected == b.result.rejected;
  }
};

/// Owns both grid models plus the per-ship stream state (prediction
/// histories and trip buffers). Training and prediction must not overlap.
class Engine {
 public:
  Engine(EngineConfig cfg, PortRegistry ports);

  /// Learns one labeled record in both models. Out-of-grid records are
  /// skipped; records with an unknown destination port or an arrival
  /// before their timestamp are rejected. Never throws for data issues.
  TrainOutcome train(const AisRecord& rec);
  TrainSummary train_all(std::span<const AisRecord> records);

  /// Predicts destination and arrival for one unlabeled record and
  /// advances the stream state (robustness history, semi-supervised
  /// buffers) at the record's event time. Throws Error(NoModel).
  Prediction predict(const AisRecord& rec);

  /// End of stream: closes every trip still sitting inside a port radius.
  void finish();

  void reset_history(const std::string& ship_id);

  const EngineConfig& config() const { return cfg_; }
  /// Swaps prediction-time settings. Grid geometry must stay identical.
  void set_config(const EngineConfig& cfg);
  const PortRegistry& ports() const { return ports_; }
  const DestGridModel& dest_model() const { return dest_; }
  const EtaGridModel& eta_model() const { return eta_; }
  const std::vector<CommittedTrip>& committed_trips() const { return committed_; }
  std::size_t discarded_trips() const { return discarded_trips_; }

  /// Versioned binary snapshot of configuration, ports and both models.
  void save(std::ostream& out) const;
  void save_file(const std::string& path) const;
  static Engine load(std::istream& in);
  static Engine load_file(const std::string& path);

  /// Model equality, ignoring per-ship stream state.
  bool same_models(const Engine& other) const {
    return cfg_ == other.cfg_ && ports_ == other.ports_ && dest_ == other.dest_ && eta_ == other.eta_;
  }

 private:
  void close_quiet_trips(double now);

  EngineConfig cfg_;
  PortRegistry ports_;
  DestGridModel dest_;
  EtaGridModel eta_;
  std::map<std::string, ShipHistory> histories_;
  std::map<std::string, TripBuffer> buffers_;
  std::set<std::string> ships_in_port_;
  std::vector<CommittedTrip> committed_;
  std::size_t discarded_trips_ = 0;
};

}  // namespace aiscell
