#include "aiscell/semi_supervised.hpp"

#include "aiscell/engine.hpp"
#include "aiscell/error.hpp"

namespace aiscell {

void observe(TripBuffer& buf, const AisRecord& rec, const std::string& reported_dest, const PortRegistry& ports) {
  if (buf.ship_id.empty()) buf.ship_id = rec.ship_id;
  buf.records.push_back(rec);
  if (!reported_dest.empty()) buf.last_reported_dest = reported_dest;

  if (buf.in_port) {
    const Port* port = ports.find(*buf.in_port);
    if (!port || haversine_nm(rec.pos, port->pos) > port->radius_nm) {
      buf.in_port.reset();
      buf.first_in_radius_ts.reset();
    }
  }
  if (!buf.in_port) {
    const Port* nearest = nullptr;
    double nearest_d = 0.0;
    for (const Port& p : ports.ports()) {
      const double d = haversine_nm(rec.pos, p.pos);
      if (d <= p.radius_nm && (!nearest || d < nearest_d)) {
        nearest = &p;
        nearest_d = d;
      }
    }
    if (nearest) {
      buf.in_port = nearest->name;
      buf.first_in_radius_ts = rec.timestamp;
    }
  }
}

std::optional<TripLabel> check_trip_end(const TripBuffer& buf, double now, double quiet_period) {
  if (!buf.in_port || buf.records.empty()) return std::nullopt;
  if (now - double(buf.records.back().timestamp) < quiet_period) return std::nullopt;
  if (!buf.last_reported_dest)
    throw Error(Errc::MissingPrediction, "trip of ship " + buf.ship_id + " ended without a prediction");
  return TripLabel{*buf.last_reported_dest, *buf.first_in_radius_ts};
}

CommitResult commit_trip(Engine& engine, TripBuffer& buf, const TripLabel& label) {
  CommitResult res;
  for (AisRecord& rec : buf.records) {
    rec.label_destination = label.destination;
    rec.label_arrival = label.arrival;
    const auto outcome = engine.train(rec);
    ++res.records;
    if (outcome.dest_trained) ++res.dest_trained;
    if (outcome.eta_trained) ++res.eta_trained;
    if (outcome.rejected) ++res.rejected;
  }
  buf.records.clear();
  buf.last_reported_dest.reset();
  buf.in_port.reset();
  buf.first_in_radius_ts.reset();
  engine.reset_history(buf.ship_id);
  return res;
}

}  // namespace aiscell
