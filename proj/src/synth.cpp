#include "aiscell/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "aiscell/error.hpp"

namespace aiscell {

namespace {

constexpr int kShipTypes[] = {30, 60, 70, 80};
constexpr double kPreferredTypeShare = 0.8;
constexpr std::int64_t kDay = 86400;
constexpr std::int64_t kTrainSpan = 30 * kDay;
constexpr std::int64_t kEvalOffset = 31 * kDay;
constexpr std::int64_t kEvalSpan = 7 * kDay;
constexpr int kPlacementAttempts = 20000;

// mt19937_64 output is fixed by the standard; the distribution helpers
// below are spelled out so datasets do not depend on the standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return double(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) { return std::min<std::size_t>(n - 1, std::size_t(uniform() * double(n))); }

  /// Standard normal truncated to [-3, 3] by rejection.
  double truncated_normal() {
    while (true) {
      const double u1 = 1.0 - uniform();  // (0, 1]
      const double u2 = uniform();
      const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
      if (std::fabs(z) <= 3.0) return z;
    }
  }

  std::uint64_t next() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

double round_to(double v, double step) { return std::round(v / step) * step; }

std::string numbered(char prefix, int n) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%c%05d", prefix, n);
  return buf;
}

struct Route {
  std::size_t from = 0;
  std::size_t to = 0;
  double service_speed = 0.0;
  int preferred_type = 70;
};

}  // namespace

void SynthConfig::validate() const {
  if (n_ports < 2) throw Error(Errc::InvalidConfig, "n_ports must be >= 2");
  if (n_train_trips < 1 || n_eval_trips < 1) throw Error(Errc::InvalidConfig, "trip counts must be >= 1");
  if (!(speed_min > 0.0) || speed_max < speed_min) throw Error(Errc::InvalidConfig, "invalid speed range");
  if (!(speed_jitter >= 0.0 && speed_jitter < 1.0)) throw Error(Errc::InvalidConfig, "speed_jitter in [0, 1)");
  if (report_interval < 1) throw Error(Errc::InvalidConfig, "report_interval must be >= 1");
  if (pos_noise_sigma < 0.0 || course_noise_sigma < 0.0) throw Error(Errc::InvalidConfig, "sigmas must be >= 0");
  if (!(lat_max - lat_min > 2.0) || !(lon_max - lon_min > 2.0))
    throw Error(Errc::InvalidConfig, "bbox must exceed 2 degrees per side");
  if (routes_per_port < 1) throw Error(Errc::InvalidConfig, "routes_per_port must be >= 1");
  if (!(min_route_angle >= 0.0 && min_route_angle <= 180.0))
    throw Error(Errc::InvalidConfig, "min_route_angle must be in [0, 180]");
  if (!(port_radius_nm > 0.0)) throw Error(Errc::InvalidConfig, "port_radius_nm must be > 0");
}

SynthConfig parse_synth_config(std::string_view text) {
  SynthConfig c;
  for (const auto& [key, value] : parse_key_values(text)) {
    auto num = [&]() {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(v))
        throw Error(Errc::InvalidConfig, "bad value for " + key);
      return v;
    };
    auto integer = [&]() {
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc() || ptr != value.data() + value.size())
        throw Error(Errc::InvalidConfig, "bad integer for " + key);
      return v;
    };
    if (key == "seed") c.seed = std::uint64_t(integer());
    else if (key == "n_ports") c.n_ports = int(integer());
    else if (key == "n_train_trips") c.n_train_trips = int(integer());
    else if (key == "n_eval_trips") c.n_eval_trips = int(integer());
    else if (key == "speed_min") c.speed_min = num();
    else if (key == "speed_max") c.speed_max = num();
    else if (key == "speed_jitter") c.speed_jitter = num();
    else if (key == "report_interval") c.report_interval = integer();
    else if (key == "pos_noise_sigma") c.pos_noise_sigma = num();
    else if (key == "course_noise_sigma") c.course_noise_sigma = num();
    else if (key == "routes_per_port") c.routes_per_port = int(integer());
    else if (key == "min_route_angle") c.min_route_angle = num();
    else if (key == "port_radius_nm") c.port_radius_nm = num();
    else if (key == "min_port_separation") c.min_port_separation = num();
    else if (key == "start_time") c.start_time = integer();
    else if (key == "bbox") {
      const auto parts = split_csv(value);
      if (parts.size() != 4) throw Error(Errc::InvalidConfig, "bbox = lat_min,lat_max,lon_min,lon_max");
      double v[4];
      for (int i = 0; i < 4; ++i) {
        const auto p = trim(parts[i]);
        auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), v[i]);
        if (ec != std::errc() || ptr != p.data() + p.size()) throw Error(Errc::InvalidConfig, "bad bbox value");
      }
      std::tie(c.lat_min, c.lat_max, c.lon_min, c.lon_max) = std::tuple(v[0], v[1], v[2], v[3]);
    } else {
      throw Error(Errc::InvalidConfig, "unknown key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

SynthConfig load_synth_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_synth_config(ss.str());
}

std::string format_synth_config(const SynthConfig& c) {
  std::ostringstream out;
  out << "seed = " << c.seed << '\n'
      << "n_ports = " << c.n_ports << '\n'
      << "n_train_trips = " << c.n_train_trips << '\n'
      << "n_eval_trips = " << c.n_eval_trips << '\n'
      << "speed_min = " << format_double(c.speed_min) << '\n'
      << "speed_max = " << format_double(c.speed_max) << '\n'
      << "speed_jitter = " << format_double(c.speed_jitter) << '\n'
      << "report_interval = " << c.report_interval << '\n'
      << "pos_noise_sigma = " << format_double(c.pos_noise_sigma) << '\n'
      << "course_noise_sigma = " << format_double(c.course_noise_sigma) << '\n'
      << "bbox = " << format_double(c.lat_min) << ',' << format_double(c.lat_max) << ','
      << format_double(c.lon_min) << ',' << format_double(c.lon_max) << '\n'
      << "routes_per_port = " << c.routes_per_port << '\n'
      << "min_route_angle = " << format_double(c.min_route_angle) << '\n'
      << "port_radius_nm = " << format_double(c.port_radius_nm) << '\n'
      << "min_port_separation = " << format_double(c.min_port_separation) << '\n'
      << "start_time = " << c.start_time << '\n';
  return out.str();
}

PortRegistry gen_ports(const SynthConfig& cfg) {
  Rng rng(cfg.seed);
  std::vector<Coord> placed;
  PortRegistry reg;
  for (int i = 0; i < cfg.n_ports; ++i) {
    bool ok = false;
    for (int attempt = 0; attempt < kPlacementAttempts && !ok; ++attempt) {
      const Coord c{round_to(rng.uniform(cfg.lat_min + 1.0, cfg.lat_max - 1.0), 1e-5),
                    round_to(rng.uniform(cfg.lon_min + 1.0, cfg.lon_max - 1.0), 1e-5)};
      ok = std::all_of(placed.begin(), placed.end(), [&](const Coord& p) {
        return std::hypot(p.lat - c.lat, p.lon - c.lon) >= cfg.min_port_separation;
      });
      if (ok) {
        placed.push_back(c);
        char name[16];
        std::snprintf(name, sizeof name, "PORT%02d", i);
        reg.add(Port{name, c, cfg.port_radius_nm});
      }
    }
    if (!ok)
      throw Error(Errc::PlacementFailure,
                  "could not place port " + std::to_string(i) + " of " + std::to_string(cfg.n_ports));
  }
  return reg;
}

TripTruth gen_trip(const Port& from, const Port& to, double speed, const SynthConfig& cfg, const TripSpec& spec) {
  TripTruth trip;
  trip.ship_id = spec.ship_id;
  trip.trip_id = spec.trip_id;
  trip.true_destination = to.name;

  Rng rng(spec.noise_seed);
  const double total = haversine_nm(from.pos, to.pos);
  const double step = speed * double(cfg.report_interval) / 3600.0;
  const auto legs = std::int64_t(std::ceil(total / step - 1e-9));
  const GridSpec box{cfg.lat_min, cfg.lat_max, cfg.lon_min, cfg.lon_max, 1.0};

  double last_course = from.pos == to.pos ? 0.0 : bearing_deg(from.pos, to.pos);
  for (std::int64_t k = 0; k <= legs; ++k) {
    const double travelled = std::min(total, double(k) * step);
    const Coord truth = interpolate(from.pos, to.pos, total > 0.0 ? travelled / total : 1.0);
    const bool last = k == legs;
    if (!last && !(truth == to.pos)) last_course = bearing_deg(truth, to.pos);

    AisRecord r;
    r.ship_id = spec.ship_id;
    r.ship_type = spec.ship_type;
    r.speed = speed;
    r.timestamp = spec.start + k * cfg.report_interval;
    r.departure_port = from.name;
    r.draught = spec.draught;

    Coord noisy{truth.lat + cfg.pos_noise_sigma * rng.truncated_normal(),
                truth.lon + cfg.pos_noise_sigma * rng.truncated_normal()};
    noisy.lat = round_to(std::clamp(noisy.lat, box.lat_min, box.lat_max), 1e-5);
    noisy.lon = round_to(std::clamp(noisy.lon, box.lon_min, box.lon_max), 1e-5);
    if (last && haversine_nm(noisy, to.pos) > to.radius_nm) noisy = to.pos;
    r.pos = noisy;

    const double course = normalize_deg(round_to(last_course + cfg.course_noise_sigma * rng.truncated_normal(), 0.1));
    r.course = course >= 360.0 ? 0.0 : course;
    r.heading = double(course_key_of(r.course));
    trip.records.push_back(std::move(r));
  }
  trip.true_arrival = trip.records.back().timestamp;
  for (auto& r : trip.records) {
    r.label_destination = trip.true_destination;
    r.label_arrival = trip.true_arrival;
  }
  return trip;
}

Dataset gen_dataset(const SynthConfig& cfg) {
  cfg.validate();
  Dataset data;
  data.ports = gen_ports(cfg);
  const auto& ports = data.ports.ports();
  const std::size_t n = ports.size();

  // link each port to its nearest neighbours, both directions, keeping
  // the lanes leaving any port at least min_route_angle apart
  std::set<std::pair<std::size_t, std::size_t>> links;
  std::vector<std::vector<double>> lane_bearings(n);
  auto fits = [&](std::size_t at, double bearing) {
    return std::all_of(lane_bearings[at].begin(), lane_bearings[at].end(),
                       [&](double b) { return angular_diff(b, bearing) >= cfg.min_route_angle; });
  };
  const std::size_t degree = std::min<std::size_t>(std::size_t(cfg.routes_per_port), n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<double, std::size_t>> by_distance;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) by_distance.emplace_back(haversine_nm(ports[i].pos, ports[j].pos), j);
    std::sort(by_distance.begin(), by_distance.end());
    for (const auto& [d, j] : by_distance) {
      if (lane_bearings[i].size() >= degree) break;
      if (links.contains({i, j})) continue;
      const double out = bearing_deg(ports[i].pos, ports[j].pos);
      const double back = bearing_deg(ports[j].pos, ports[i].pos);
      // an isolated port always gets its nearest neighbour
      if (!lane_bearings[i].empty() && !(fits(i, out) && fits(j, back))) continue;
      links.emplace(i, j);
      links.emplace(j, i);
      lane_bearings[i].push_back(out);
      lane_bearings[j].push_back(back);
    }
  }

  Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<Route> routes;
  for (const auto& [a, b] : links) {
    Route r{a, b, round_to(rng.uniform(cfg.speed_min, cfg.speed_max), 0.1), 0};
    r.preferred_type = kShipTypes[rng.index(std::size(kShipTypes))];
    routes.push_back(r);
  }

  auto make_trip = [&](char prefix, int index, std::int64_t window_start, std::int64_t window) {
    const Route& route = routes[rng.index(routes.size())];
    const double speed =
        std::max(0.1, round_to(route.service_speed * (1.0 + rng.uniform(-cfg.speed_jitter, cfg.speed_jitter)), 0.1));
    TripSpec spec;
    spec.ship_id = numbered(prefix, index);
    spec.trip_id = spec.ship_id + "-1";
    spec.ship_type = rng.uniform() < kPreferredTypeShare ? route.preferred_type
                                                         : kShipTypes[rng.index(std::size(kShipTypes))];
    spec.draught = round_to(rng.uniform(4.0, 12.0), 0.1);
    spec.start = window_start + std::int64_t(rng.uniform() * double(window));
    spec.noise_seed = rng.next();
    return gen_trip(ports[route.from], ports[route.to], speed, cfg, spec);
  };

  for (int i = 0; i < cfg.n_train_trips; ++i)
    data.train_trips.push_back(make_trip('T', i + 1, cfg.start_time, kTrainSpan));
  for (int i = 0; i < cfg.n_eval_trips; ++i)
    data.eval_trips.push_back(make_trip('E', i + 1, cfg.start_time + kEvalOffset, kEvalSpan));
  return data;
}

namespace {

std::vector<AisRecord> merged(const std::vector<TripTruth>& trips, bool keep_labels) {
  std::vector<AisRecord> out;
  for (const auto& t : trips)
    for (const auto& r : t.records) {
      out.push_back(r);
      if (!keep_labels) {
        out.back().label_destination.reset();
        out.back().label_arrival.reset();
      }
    }
  std::stable_sort(out.begin(), out.end(), [](const AisRecord& a, const AisRecord& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.ship_id < b.ship_id;
  });
  return out;
}

}  // namespace

std::vector<AisRecord> Dataset::train_records() const { return merged(train_trips, true); }
std::vector<AisRecord> Dataset::eval_records() const { return merged(eval_trips, false); }

std::vector<TruthRow> Dataset::truth_rows() const {
  std::vector<TruthRow> rows;
  for (const auto& t : eval_trips) rows.push_back(TruthRow{t.ship_id, t.trip_id, t.true_destination, t.true_arrival});
  return rows;
}

std::vector<std::string> write_dataset(const Dataset& data, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto open = [](const fs::path& p) {
    std::ofstream out(p);
    if (!out) throw Error(Errc::Io, "cannot write " + p.string());
    return out;
  };
  const fs::path base(dir);
  std::vector<std::string> written;

  {
    const auto p = base / "train.csv";
    auto out = open(p);
    out << kTrainHeader << '\n';
    for (const auto& r : data.train_records()) out << format_record(r, Schema::Train) << '\n';
    written.push_back(p.string());
  }
  {
    const auto p = base / "eval.csv";
    auto out = open(p);
    out << kEvalHeader << '\n';
    for (const auto& r : data.eval_records()) out << format_record(r, Schema::Eval) << '\n';
    written.push_back(p.string());
  }
  {
    const auto p = base / "truth.csv";
    auto out = open(p);
    write_truth(out, data.truth_rows());
    written.push_back(p.string());
  }
  {
    const auto p = base / "ports.csv";
    auto out = open(p);
    write_ports(out, data.ports);
    written.push_back(p.string());
  }
  return written;
}

}  // namespace aiscell
