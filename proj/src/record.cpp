#include "aiscell/record.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "aiscell/error.hpp"

namespace aiscell {

namespace {

[[noreturn]] void malformed(std::string_view line, const std::string& why) {
  throw Error(Errc::MalformedLine, why + " in line '" + std::string(line) + "'");
}

double parse_double(std::string_view field, std::string_view line, const char* name) {
  field = trim(field);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v))
    malformed(line, std::string("bad ") + name);
  return v;
}

std::int64_t parse_int(std::string_view field, std::string_view line, const char* name) {
  field = trim(field);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) malformed(line, std::string("bad ") + name);
  return v;
}

bool parse_bool(std::string_view v) {
  if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "off" || v == "0" || v == "no") return false;
  throw Error(Errc::InvalidConfig, "bad boolean '" + std::string(v) + "'");
}

void check_header(std::istream& in, std::string_view expected) {
  std::string header;
  if (!std::getline(in, header)) throw Error(Errc::MalformedLine, "missing header row");
  if (!header.empty() && header.back() == '\r') header.pop_back();
  // tolerate a UTF-8 byte order mark
  if (header.starts_with("\xEF\xBB\xBF")) header.erase(0, 3);
  if (trim(header) != expected)
    throw Error(Errc::MalformedLine, "unexpected header '" + header + "', want '" + std::string(expected) + "'");
}

}  // namespace

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string to_upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

int speed_bucket_of(double speed, double bucket) { return static_cast<int>(std::floor(speed / bucket)); }

int course_key_of(double course) {
  const long k = std::lround(course);
  return static_cast<int>(((k % 360) + 360) % 360);
}

AisRecord parse_record(std::string_view line, Schema schema) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto f = split_csv(line);
  // A train line cut short has lost its trailing label columns.
  if (schema == Schema::Train && f.size() < 12) throw Error(Errc::MissingLabel, std::string(line));
  const std::size_t want = schema == Schema::Train ? 12 : 10;
  if (f.size() != want) malformed(line, "expected " + std::to_string(want) + " fields, got " + std::to_string(f.size()));

  AisRecord r;
  r.ship_id = std::string(trim(f[0]));
  if (r.ship_id.empty()) malformed(line, "empty SHIP_ID");
  r.ship_type = static_cast<int>(parse_int(f[1], line, "SHIPTYPE"));
  r.speed = parse_double(f[2], line, "SPEED");
  if (r.speed < 0.0) malformed(line, "negative SPEED");
  r.pos.lon = parse_double(f[3], line, "LON");
  r.pos.lat = parse_double(f[4], line, "LAT");
  if (!r.pos.valid()) malformed(line, "position out of range");
  r.course = parse_double(f[5], line, "COURSE");
  if (r.course < 0.0 || r.course > 360.0) malformed(line, "COURSE out of range");
  if (r.course == 360.0) r.course = 0.0;
  if (!trim(f[6]).empty()) {
    const double h = parse_double(f[6], line, "HEADING");
    if (h != kHeadingUnavailable) {
      if (h < 0.0 || h >= 360.0) malformed(line, "HEADING out of range");
      r.heading = h;
    }
  }
  r.timestamp = parse_int(f[7], line, "TIMESTAMP");
  r.departure_port = to_upper(trim(f[8]));
  if (!trim(f[9]).empty()) r.draught = parse_double(f[9], line, "DRAUGHT");

  if (schema == Schema::Train) {
    const auto dest = trim(f[10]);
    const auto arrival = trim(f[11]);
    if (dest.empty() || arrival.empty()) throw Error(Errc::MissingLabel, std::string(line));
    r.label_destination = to_upper(dest);
    r.label_arrival = parse_int(arrival, line, "ARRIVAL_TIME");
    if (*r.label_arrival < r.timestamp) malformed(line, "ARRIVAL_TIME before TIMESTAMP");
  }
  return r;
}

std::string format_record(const AisRecord& r, Schema schema) {
  std::string out;
  out.reserve(96);
  out += r.ship_id;
  out += ',';
  out += std::to_string(r.ship_type);
  out += ',';
  out += format_double(r.speed);
  out += ',';
  out += format_double(r.pos.lon);
  out += ',';
  out += format_double(r.pos.lat);
  out += ',';
  out += format_double(r.course);
  out += ',';
  out += r.heading ? format_double(*r.heading) : std::to_string(kHeadingUnavailable);
  out += ',';
  out += std::to_string(r.timestamp);
  out += ',';
  out += r.departure_port;
  out += ',';
  if (r.draught) out += format_double(*r.draught);
  if (schema == Schema::Train) {
    out += ',';
    out += r.label_destination.value_or("");
    out += ',';
    if (r.label_arrival) out += std::to_string(*r.label_arrival);
  }
  return out;
}

std::vector<AisRecord> read_records(std::istream& in, Schema schema) {
  check_header(in, schema == Schema::Train ? kTrainHeader : kEvalHeader);
  std::vector<AisRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    out.push_back(parse_record(line, schema));
  }
  return out;
}

void read_header(std::istream& in, Schema schema) {
  check_header(in, schema == Schema::Train ? kTrainHeader : kEvalHeader);
}

std::vector<AisRecord> read_records_file(const std::string& path, Schema schema) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  return read_records(in, schema);
}

void PortRegistry::add(Port port) {
  port.name = to_upper(port.name);
  if (index_.contains(port.name)) throw Error(Errc::DuplicatePort, port.name);
  index_.emplace(port.name, ports_.size());
  ports_.push_back(std::move(port));
}

const Port* PortRegistry::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : &ports_[it->second];
}

PortRegistry load_ports(std::istream& in) {
  PortRegistry reg;
  std::string line;
  if (!std::getline(in, line) || trim(line).empty()) return reg;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (trim(line) != kPortsHeader) throw Error(Errc::MalformedLine, "unexpected ports header '" + line + "'");
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 4) malformed(line, "expected 4 fields");
    Port p;
    p.name = std::string(trim(f[0]));
    if (p.name.empty()) malformed(line, "empty port name");
    p.pos.lon = parse_double(f[1], line, "LON");
    p.pos.lat = parse_double(f[2], line, "LAT");
    p.radius_nm = parse_double(f[3], line, "RADIUS_NM");
    if (!p.pos.valid() || !(p.radius_nm > 0.0)) malformed(line, "invalid port geometry");
    reg.add(std::move(p));
  }
  return reg;
}

PortRegistry load_ports_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  return load_ports(in);
}

void write_ports(std::ostream& out, const PortRegistry& ports) {
  out << kPortsHeader << '\n';
  for (const auto& p : ports.ports())
    out << p.name << ',' << format_double(p.pos.lon) << ',' << format_double(p.pos.lat) << ','
        << format_double(p.radius_nm) << '\n';
}

std::string_view to_string(EtaDimension d) {
  switch (d) {
    case EtaDimension::Course: return "course";
    case EtaDimension::Speed: return "speed";
    case EtaDimension::Departure: return "departure";
  }
  return "?";
}

std::string_view to_string(TieBreak t) {
  switch (t) {
    case TieBreak::GeoCourse: return "geo_course";
    case TieBreak::GeoDistance: return "geo_distance";
    case TieBreak::DepartureFreq: return "departure_freq";
    case TieBreak::TypeFreq: return "type_freq";
  }
  return "?";
}

void EngineConfig::validate() const {
  dest_grid().validate();
  eta_grid().validate();
  if (!(course_tolerance >= 0.0 && course_tolerance <= 180.0))
    throw Error(Errc::InvalidConfig, "course_tolerance must be in [0, 180]");
  if (!(speed_bucket > 0.0)) throw Error(Errc::InvalidConfig, "speed_bucket must be > 0");
  if (max_ring_radius < 0) throw Error(Errc::InvalidConfig, "max_ring_radius must be >= 0");
  if (robustness_k < 1) throw Error(Errc::InvalidConfig, "robustness_k must be >= 1");
  if (robustness_window < 1) throw Error(Errc::InvalidConfig, "robustness_window must be >= 1");
  if (!(quiet_period >= 0.0)) throw Error(Errc::InvalidConfig, "quiet_period must be >= 0");
  auto order = tie_break_order;
  std::sort(order.begin(), order.end());
  if (order.size() != 4 || std::adjacent_find(order.begin(), order.end()) != order.end())
    throw Error(Errc::InvalidConfig, "tie_break_order must be a permutation of the four criteria");
}

std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(Errc::InvalidConfig, "line " + std::to_string(lineno) + ": expected key = value");
    out.emplace_back(std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))));
  }
  return out;
}

EngineConfig parse_config(std::string_view text) {
  EngineConfig cfg;
  for (const auto& [key_s, value_s] : parse_key_values(text)) {
    const std::string_view key = key_s;
    const std::string_view value = value_s;
    auto num = [&](const char* name) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(v))
        throw Error(Errc::InvalidConfig, std::string("bad value for ") + name);
      return v;
    };
    auto integer = [&](const char* name) {
      const double v = num(name);
      if (v != std::floor(v)) throw Error(Errc::InvalidConfig, std::string(name) + " must be an integer");
      return static_cast<int>(v);
    };
    if (key == "dest_granularity") {
      cfg.dest_granularity = num("dest_granularity");
    } else if (key == "eta_granularity") {
      cfg.eta_granularity = num("eta_granularity");
    } else if (key == "bbox") {
      const auto parts = split_csv(value);
      if (parts.size() != 4) throw Error(Errc::InvalidConfig, "bbox = lat_min,lat_max,lon_min,lon_max");
      std::array<double, 4> v{};
      for (std::size_t i = 0; i < 4; ++i) {
        const auto p = trim(parts[i]);
        auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), v[i]);
        if (ec != std::errc() || ptr != p.data() + p.size()) throw Error(Errc::InvalidConfig, "bad bbox value");
      }
      cfg.lat_min = v[0];
      cfg.lat_max = v[1];
      cfg.lon_min = v[2];
      cfg.lon_max = v[3];
    } else if (key == "course_tolerance") {
      cfg.course_tolerance = num("course_tolerance");
    } else if (key == "speed_bucket") {
      cfg.speed_bucket = num("speed_bucket");
    } else if (key == "max_ring_radius") {
      cfg.max_ring_radius = integer("max_ring_radius");
    } else if (key == "robustness_k") {
      cfg.robustness_k = integer("robustness_k");
    } else if (key == "robustness_window") {
      cfg.robustness_window = integer("robustness_window");
    } else if (key == "eta_dimension") {
      if (value == "course") cfg.eta_dimension = EtaDimension::Course;
      else if (value == "speed") cfg.eta_dimension = EtaDimension::Speed;
      else if (value == "departure") cfg.eta_dimension = EtaDimension::Departure;
      else throw Error(Errc::InvalidConfig, "eta_dimension must be course, speed or departure");
    } else if (key == "time_adjustment") {
      cfg.time_adjustment = parse_bool(value);
    } else if (key == "semi_supervised") {
      cfg.semi_supervised = parse_bool(value);
    } else if (key == "quiet_period") {
      cfg.quiet_period = num("quiet_period");
    } else if (key == "tie_break_order") {
      cfg.tie_break_order.clear();
      for (auto part : split_csv(value)) {
        part = trim(part);
        if (part == "geo_course") cfg.tie_break_order.push_back(TieBreak::GeoCourse);
        else if (part == "geo_distance") cfg.tie_break_order.push_back(TieBreak::GeoDistance);
        else if (part == "departure_freq") cfg.tie_break_order.push_back(TieBreak::DepartureFreq);
        else if (part == "type_freq") cfg.tie_break_order.push_back(TieBreak::TypeFreq);
        else throw Error(Errc::InvalidConfig, "unknown tie-break '" + std::string(part) + "'");
      }
    } else {
      throw Error(Errc::InvalidConfig, "unknown key '" + std::string(key) + "'");
    }
  }
  cfg.validate();
  return cfg;
}

EngineConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const EngineConfig& c) {
  std::ostringstream out;
  out << "dest_granularity = " << format_double(c.dest_granularity) << '\n'
      << "eta_granularity = " << format_double(c.eta_granularity) << '\n'
      << "bbox = " << format_double(c.lat_min) << ',' << format_double(c.lat_max) << ','
      << format_double(c.lon_min) << ',' << format_double(c.lon_max) << '\n'
      << "course_tolerance = " << format_double(c.course_tolerance) << '\n'
      << "speed_bucket = " << format_double(c.speed_bucket) << '\n'
      << "max_ring_radius = " << c.max_ring_radius << '\n'
      << "robustness_k = " << c.robustness_k << '\n'
      << "robustness_window = " << c.robustness_window << '\n'
      << "eta_dimension = " << to_string(c.eta_dimension) << '\n'
      << "time_adjustment = " << (c.time_adjustment ? "true" : "false") << '\n'
      << "semi_supervised = " << (c.semi_supervised ? "true" : "false") << '\n'
      << "quiet_period = " << format_double(c.quiet_period) << '\n'
      << "tie_break_order = ";
  for (std::size_t i = 0; i < c.tie_break_order.size(); ++i)
    out << (i ? "," : "") << to_string(c.tie_break_order[i]);
  out << '\n';
  return out.str();
}

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::OutOfBounds: return "OutOfBounds";
    case Errc::Undefined: return "Undefined";
    case Errc::MalformedLine: return "MalformedLine";
    case Errc::MissingLabel: return "MissingLabel";
    case Errc::DuplicatePort: return "DuplicatePort";
    case Errc::UnknownPort: return "UnknownPort";
    case Errc::NoModel: return "NoModel";
    case Errc::NoEtaModel: return "NoEtaModel";
    case Errc::NegativeRemaining: return "NegativeRemaining";
    case Errc::ZeroSpeed: return "ZeroSpeed";
    case Errc::MissingPrediction: return "MissingPrediction";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::PlacementFailure: return "PlacementFailure";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::Io: return "Io";
    case Errc::BadSnapshot: return "BadSnapshot";
  }
  return "Unknown";
}

}  // namespace aiscell
