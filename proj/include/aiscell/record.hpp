#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "aiscell/geo.hpp"

namespace aiscell {

using EpochSeconds = std::int64_t;

/// AIS value meaning "heading not available".
inline constexpr int kHeadingUnavailable = 511;

struct AisRecord {
  std::string ship_id;
  int ship_type = 0;
  double speed = 0.0;  // knots
  Coord pos;
  double course = 0.0;  // degrees over ground, [0, 360)
  std::optional<double> heading;
  EpochSeconds timestamp = 0;
  std::string departure_port;
  std::optional<double> draught;  // meters
  std::optional<std::string> label_destination;
  std::optional<EpochSeconds> label_arrival;

  bool labeled() const { return label_destination.has_value() && label_arrival.has_value(); }
  friend bool operator==(const AisRecord&, const AisRecord&) = default;
};

enum class Schema { Train, Eval };

inline constexpr std::string_view kEvalHeader =
    "SHIP_ID,SHIPTYPE,SPEED,LON,LAT,COURSE,HEADING,TIMESTAMP,DEPARTURE_PORT_NAME,DRAUGHT";
inline constexpr std::string_view kTrainHeader =
    "SHIP_ID,SHIPTYPE,SPEED,LON,LAT,COURSE,HEADING,TIMESTAMP,DEPARTURE_PORT_NAME,DRAUGHT,"
    "ARRIVAL_PORT,ARRIVAL_TIME";
inline constexpr std::string_view kPortsHeader = "NAME,LON,LAT,RADIUS_NM";

/// Parses one data line (no header). Throws Error(MalformedLine) on bad
/// arity or fields, Error(MissingLabel) for a train line without labels.
AisRecord parse_record(std::string_view line, Schema schema);

/// Inverse of parse_record; labels are written only for Schema::Train.
std::string format_record(const AisRecord& rec, Schema schema);

/// Reads a whole CSV stream. The header row is required and checked.
std::vector<AisRecord> read_records(std::istream& in, Schema schema);
/// Consumes and checks the header row only, for line-by-line streaming.
void read_header(std::istream& in, Schema schema);
std::vector<AisRecord> read_records_file(const std::string& path, Schema schema);

int speed_bucket_of(double speed, double bucket);
int course_key_of(double course);

std::string to_upper(std::string_view s);

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

struct Port {
  std::string name;
  Coord pos;
  double radius_nm = 2.0;

  friend bool operator==(const Port&, const Port&) = default;
};

class PortRegistry {
 public:
  PortRegistry() = default;

  /// Throws Error(DuplicatePort) when the name is already registered.
  void add(Port port);

  const Port* find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }
  const std::vector<Port>& ports() const { return ports_; }
  std::size_t size() const { return ports_.size(); }
  bool empty() const { return ports_.empty(); }

  friend bool operator==(const PortRegistry& a, const PortRegistry& b) { return a.ports_ == b.ports_; }

 private:
  std::vector<Port> ports_;
  std::unordered_map<std::string, std::size_t> index_;
};

PortRegistry load_ports(std::istream& in);
PortRegistry load_ports_file(const std::string& path);
void write_ports(std::ostream& out, const PortRegistry& ports);

enum class EtaDimension { Course, Speed, Departure };

enum class TieBreak { GeoCourse, GeoDistance, DepartureFreq, TypeFreq };

struct EngineConfig {
  double dest_granularity = 1.0;
  double eta_granularity = 0.005;
  double lat_min = 30.0;
  double lat_max = 46.0;
  double lon_min = -6.0;
  double lon_max = 36.5;
  double course_tolerance = 15.0;
  double speed_bucket = 0.5;
  int max_ring_radius = 10;
  int robustness_k = 1;
  int robustness_window = 64;
  EtaDimension eta_dimension = EtaDimension::Course;
  bool time_adjustment = true;
  bool semi_supervised = false;
  double quiet_period = 1800.0;
  std::vector<TieBreak> tie_break_order{TieBreak::GeoCourse, TieBreak::GeoDistance,
                                        TieBreak::DepartureFreq, TieBreak::TypeFreq};

  GridSpec dest_grid() const { return GridSpec{lat_min, lat_max, lon_min, lon_max, dest_granularity}; }
  GridSpec eta_grid() const { return GridSpec{lat_min, lat_max, lon_min, lon_max, eta_granularity}; }

  /// Throws Error(InvalidConfig) on any violated invariant.
  void validate() const;

  friend bool operator==(const EngineConfig&, const EngineConfig&) = default;
};

/// Parses `key = value` lines; '#' starts a comment. Unknown keys and
/// malformed values throw Error(InvalidConfig). Missing keys keep defaults.
EngineConfig parse_config(std::string_view text);
EngineConfig load_config_file(const std::string& path);
std::string format_config(const EngineConfig& cfg);

std::string_view to_string(EtaDimension d);
std::string_view to_string(TieBreak t);

/// `key = value` lines in file order; '#' starts a comment. Throws
/// Error(InvalidConfig) on a line without '='.
std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text);

/// Splits a line on ',' without quote handling (none of the formats quote).
std::vector<std::string_view> split_csv(std::string_view line);
std::string_view trim(std::string_view s);

}  // namespace aiscell
