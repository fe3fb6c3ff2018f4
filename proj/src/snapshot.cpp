// Binary model snapshots (cereal portable binary archives).

#include <cereal/archives/portable_binary.hpp>
#include <cereal/types/optional.hpp>
#include <cereal/types/string.hpp>
#include <cereal/types/vector.hpp>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "aiscell/engine.hpp"
#include "aiscell/error.hpp"

// Hash maps are written in key order so that equal models always produce
// identical snapshot bytes, whatever their bucket layout.
namespace cereal {

template <class Archive, class K, class V, class H, class E, class A>
void CEREAL_SAVE_FUNCTION_NAME(Archive& ar, const std::unordered_map<K, V, H, E, A>& map) {
  std::vector<const typename std::unordered_map<K, V, H, E, A>::value_type*> items;
  items.reserve(map.size());
  for (const auto& kv : map) items.push_back(&kv);
  std::sort(items.begin(), items.end(), [](auto* a, auto* b) { return a->first < b->first; });
  ar(make_size_tag(static_cast<size_type>(items.size())));
  for (const auto* kv : items) ar(make_map_item(kv->first, kv->second));
}

template <class Archive, class K, class V, class H, class E, class A>
void CEREAL_LOAD_FUNCTION_NAME(Archive& ar, std::unordered_map<K, V, H, E, A>& map) {
  size_type n = 0;
  ar(make_size_tag(n));
  map.clear();
  map.reserve(static_cast<std::size_t>(n));
  for (size_type i = 0; i < n; ++i) {
    K key{};
    V value{};
    ar(make_map_item(key, value));
    map.emplace(std::move(key), std::move(value));
  }
}

}  // namespace cereal

namespace aiscell {

namespace {

constexpr char kMagic[8] = {'A', 'I', 'S', 'C', 'E', 'L', 'L', '\0'};
constexpr std::uint32_t kSnapshotVersion = 1;

}  // namespace

template <class Archive>
void serialize(Archive& ar, Coord& c) {
  ar(c.lat, c.lon);
}

template <class Archive>
void serialize(Archive& ar, GridSpec& g) {
  ar(g.lat_min, g.lat_max, g.lon_min, g.lon_max, g.granularity);
}

template <class Archive>
void serialize(Archive& ar, AisRecord& r) {
  ar(r.ship_id, r.ship_type, r.speed, r.pos, r.course, r.heading, r.timestamp, r.departure_port, r.draught,
     r.label_destination, r.label_arrival);
}

template <class Archive>
void serialize(Archive& ar, Port& p) {
  ar(p.name, p.pos, p.radius_nm);
}

template <class Archive>
void serialize(Archive& ar, DimTables& d) {
  ar(d.by_type, d.by_speed, d.by_departure);
}

template <class Archive>
void serialize(Archive& ar, DestCellModel& c) {
  ar(c.by_course, c.trained_count);
}

template <class Archive>
void serialize(Archive& ar, DestGridModel& m) {
  ar(m.grid, m.cells, m.departure_totals, m.type_totals, m.destination_totals, m.trained, m.skipped);
}

template <class Archive>
void serialize(Archive& ar, TimeStats& s) {
  ar(s.count, s.mean_remaining, s.ref_record, s.ref_remaining);
}

template <class Archive>
void serialize(Archive& ar, DestTimeTables& t) {
  ar(t.overall, t.by_course, t.by_speed, t.by_departure);
}

template <class Archive>
void serialize(Archive& ar, EtaCellModel& c) {
  ar(c.by_destination, c.trained_count);
}

template <class Archive>
void serialize(Archive& ar, EtaGridModel& m) {
  ar(m.grid, m.cells, m.global, m.all_destinations, m.trained, m.skipped);
}

void Engine::save(std::ostream& out) const {
  out.write(kMagic, sizeof kMagic);
  cereal::PortableBinaryOutputArchive ar(out);
  ar(kSnapshotVersion, format_config(cfg_), ports_.ports(), dest_, eta_);
  if (!out) throw Error(Errc::Io, "snapshot write failed");
}

void Engine::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path);
  save(out);
}

Engine Engine::load(std::istream& in) {
  char magic[sizeof kMagic] = {};
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw Error(Errc::BadSnapshot, "not a model snapshot");
  try {
    cereal::PortableBinaryInputArchive ar(in);
    std::uint32_t version = 0;
    ar(version);
    if (version != kSnapshotVersion)
      throw Error(Errc::BadSnapshot, "unsupported snapshot version " + std::to_string(version));
    std::string cfg_text;
    std::vector<Port> ports;
    ar(cfg_text, ports);
    PortRegistry reg;
    for (auto& p : ports) reg.add(std::move(p));
    Engine engine(parse_config(cfg_text), std::move(reg));
    ar(engine.dest_, engine.eta_);
    return engine;
  } catch (const cereal::Exception& e) {
    throw Error(Errc::BadSnapshot, e.what());
  }
}

Engine Engine::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  return load(in);
}

}  // namespace aiscell
