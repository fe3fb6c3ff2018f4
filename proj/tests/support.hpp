#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "aiscell/record.hpp"

namespace aiscell::testing {

inline AisRecord make_record(double lat, double lon, double course, double speed = 12.0,
                             EpochSeconds ts = 1000, int type = 70, std::string departure = "TANGER") {
  AisRecord r;
  r.ship_id = "V1";
  r.ship_type = type;
  r.speed = speed;
  r.pos = {lat, lon};
  r.course = course;
  r.heading = course;
  r.timestamp = ts;
  r.departure_port = std::move(departure);
  r.draught = 7.5;
  return r;
}

inline AisRecord labeled(AisRecord r, std::string dest, EpochSeconds arrival) {
  r.label_destination = std::move(dest);
  r.label_arrival = arrival;
  return r;
}

inline PortRegistry make_ports(std::initializer_list<Port> ports) {
  PortRegistry reg;
  for (const Port& p : ports) reg.add(p);
  return reg;
}

/// Fresh, empty scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("aiscell_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace aiscell::testing
