#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "aiscell/evaluation.hpp"
#include "aiscell/record.hpp"

namespace aiscell {

struct SynthConfig {
  std::uint64_t seed = 42;
  int n_ports = 20;
  int n_train_trips = 500;
  int n_eval_trips = 100;
  double speed_min = 10.0;  // knots
  double speed_max = 20.0;
  /// Per-trip relative deviation from the route's service speed.
  double speed_jitter = 0.01;
  std::int64_t report_interval = 600;  // seconds
  double pos_noise_sigma = 0.01;       // degrees
  double course_noise_sigma = 5.0;     // degrees
  double lat_min = 30.0;
  double lat_max = 46.0;
  double lon_min = -6.0;
  double lon_max = 36.5;
  /// Each port links to this many nearest ports; trips only run on links.
  int routes_per_port = 3;
  /// Minimum angle between two lanes leaving the same port, degrees.
  double min_route_angle = 30.0;
  double port_radius_nm = 2.0;
  double min_port_separation = 0.5;  // degrees
  std::int64_t start_time = 1525132800;  // 2018-05-01T00:00:00Z

  void validate() const;
};

/// Same `key = value` format as the engine configuration.
SynthConfig parse_synth_config(std::string_view text);
SynthConfig load_synth_config_file(const std::string& path);
std::string format_synth_config(const SynthConfig& cfg);

/// Ports placed uniformly (1 degree inside the box) at least
/// min_port_separation degrees apart. Throws Error(PlacementFailure).
PortRegistry gen_ports(const SynthConfig& cfg);

struct TripSpec {
  std::string ship_id;
  std::string trip_id;
  int ship_type = 70;
  double draught = 8.0;
  EpochSeconds start = 0;
  std::uint64_t noise_seed = 0;
};

/// One constant-speed great-circle voyage from `from` to `to`, reported
/// every report_interval seconds and ending on `to`. Records carry labels.
TripTruth gen_trip(const Port& from, const Port& to, double speed, const SynthConfig& cfg, const TripSpec& spec);

struct Dataset {
  PortRegistry ports;
  std::vector<TripTruth> train_trips;
  std::vector<TripTruth> eval_trips;

  /// Labeled training records, time-ordered.
  std::vector<AisRecord> train_records() const;
  /// Unlabeled evaluation stream, time-ordered.
  std::vector<AisRecord> eval_records() const;
  std::vector<TruthRow> truth_rows() const;
};

Dataset gen_dataset(const SynthConfig& cfg);

/// Writes train.csv, eval.csv, truth.csv and ports.csv into `dir`.
/// Returns the written paths.
std::vector<std::string> write_dataset(const Dataset& data, const std::string& dir);

}  // namespace aiscell
