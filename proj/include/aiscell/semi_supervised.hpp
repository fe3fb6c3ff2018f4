#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aiscell/record.hpp"

namespace aiscell {

class Engine;

/// Unlabeled records of one ship's current trip, plus port-radius state
/// used to detect that the trip has ended.
struct TripBuffer {
  std::string ship_id;
  std::vector<AisRecord> records;
  std::optional<std::string> last_reported_dest;
  std::optional<std::string> in_port;
  std::optional<EpochSeconds> first_in_radius_ts;
};

struct TripLabel {
  std::string destination;
  EpochSeconds arrival = 0;

  friend bool operator==(const TripLabel&, const TripLabel&) = default;
};

/// Buffers `rec` and tracks whether the ship sits inside a port radius.
void observe(TripBuffer& buf, const AisRecord& rec, const std::string& reported_dest, const PortRegistry& ports);

/// Label for a finished trip: the ship is inside a port radius and has been
/// silent for at least `quiet_period` seconds of event time at `now`. Pass
/// +infinity at end of stream. Throws Error(MissingPrediction) when the
/// trip ended but no destination was ever reported.
std::optional<TripLabel> check_trip_end(const TripBuffer& buf, double now, double quiet_period);

struct CommitResult {
  std::size_t records = 0;
  std::size_t dest_trained = 0;
  std::size_t eta_trained = 0;
  std::size_t rejected = 0;
};

/// Labels every buffered record, feeds them through both models, clears
/// the buffer and forgets the ship's prediction history.
CommitResult commit_trip(Engine& engine, TripBuffer& buf, const TripLabel& label);

}  // namespace aiscell
