#include "aiscell/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "aiscell/error.hpp"

namespace aiscell {

namespace {

void check_lengths(const TripOutcome& t) {
  const auto n = t.second.records.size();
  if (t.first.destinations.size() != n || t.first.arrivals.size() != n)
    throw Error(Errc::LengthMismatch, "trip " + t.second.trip_id + " of ship " + t.second.ship_id + ": " +
                                          std::to_string(t.first.destinations.size()) + " predictions for " +
                                          std::to_string(n) + " records");
}

std::int64_t field_int(std::string_view f, std::string_view line) {
  f = trim(f);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (ec != std::errc() || ptr != f.data() + f.size())
    throw Error(Errc::MalformedLine, "bad integer in line '" + std::string(line) + "'");
  return v;
}

template <class Row, class Parse>
std::vector<Row> read_rows(std::istream& in, std::string_view header, std::size_t arity, Parse parse) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::MalformedLine, "missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (trim(line) != header) throw Error(Errc::MalformedLine, "unexpected header '" + line + "'");
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != arity) throw Error(Errc::MalformedLine, "wrong arity in line '" + line + "'");
    rows.push_back(parse(f, line));
  }
  return rows;
}

}  // namespace

double route_accuracy(std::span<const TripOutcome> trips) {
  std::size_t correct = 0, total = 0;
  for (const auto& t : trips) {
    check_lengths(t);
    for (const auto& d : t.first.destinations) correct += (d == t.second.true_destination);
    total += t.second.records.size();
  }
  return total == 0 ? 0.0 : double(correct) / double(total);
}

double time_weighted_accuracy(std::span<const TripOutcome> trips) {
  double correct = 0.0, total = 0.0;
  for (const auto& t : trips) {
    check_lengths(t);
    const auto& recs = t.second.records;
    std::vector<double> w(recs.size(), 0.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < recs.size(); ++i) {
      const EpochSeconds until = i + 1 < recs.size() ? recs[i + 1].timestamp : t.second.true_arrival;
      w[i] = double(std::max<EpochSeconds>(0, until - recs[i].timestamp));
      sum += w[i];
    }
    // a trip with no elapsed time still counts, record by record
    if (sum == 0.0) std::fill(w.begin(), w.end(), 1.0);
    for (std::size_t i = 0; i < recs.size(); ++i) {
      total += w[i];
      if (t.first.destinations[i] == t.second.true_destination) correct += w[i];
    }
  }
  return total == 0.0 ? 0.0 : correct / total;
}

EtaError eta_error(std::span<const TripOutcome> trips) {
  std::vector<double> errors;
  for (const auto& t : trips) {
    check_lengths(t);
    for (EpochSeconds a : t.first.arrivals) errors.push_back(std::fabs(double(a - t.second.true_arrival)) / 60.0);
  }
  if (errors.empty()) return {};
  std::sort(errors.begin(), errors.end());
  const double mean = std::accumulate(errors.begin(), errors.end(), 0.0) / double(errors.size());
  const std::size_t n = errors.size();
  const double median = n % 2 ? errors[n / 2] : 0.5 * (errors[n / 2 - 1] + errors[n / 2]);
  return {mean, median};
}

std::string_view to_string(Dimension d) {
  switch (d) {
    case Dimension::Type: return "type";
    case Dimension::Speed: return "speed";
    case Dimension::Departure: return "departure";
    case Dimension::Draught: return "draught";
    case Dimension::Course: return "course";
    case Dimension::Heading: return "heading";
  }
  return "?";
}

std::map<Dimension, std::optional<double>> dimension_diagnostic(std::span<const AisRecord> train_set,
                                                                double speed_bucket) {
  auto key_of = [&](Dimension d, const AisRecord& r) -> std::optional<std::string> {
    switch (d) {
      case Dimension::Type: return std::to_string(r.ship_type);
      case Dimension::Speed: return std::to_string(speed_bucket_of(r.speed, speed_bucket));
      case Dimension::Departure: return r.departure_port;
      case Dimension::Draught:
        if (!r.draught) return std::nullopt;
        return format_double(*r.draught);
      case Dimension::Course: return std::to_string(course_key_of(r.course));
      case Dimension::Heading:
        if (!r.heading) return std::nullopt;
        return std::to_string(course_key_of(*r.heading));
    }
    return std::nullopt;
  };

  std::map<Dimension, std::optional<double>> out;
  for (Dimension d : kAllDimensions) {
    std::unordered_map<std::string, std::map<std::string, std::uint64_t>> freq;
    for (const auto& r : train_set) {
      if (!r.label_destination) continue;
      if (auto k = key_of(d, r)) ++freq[*k][*r.label_destination];
    }
    std::unordered_map<std::string, std::string> best;
    for (const auto& [k, counts] : freq) {
      // std::map iterates names ascending, so strict > keeps the
      // lexicographically smallest of equally frequent destinations
      const std::string* top = nullptr;
      std::uint64_t top_n = 0;
      for (const auto& [dest, n] : counts)
        if (n > top_n) top = &dest, top_n = n;
      best[k] = *top;
    }
    std::size_t wrong = 0, scored = 0;
    for (const auto& r : train_set) {
      if (!r.label_destination) continue;
      auto k = key_of(d, r);
      if (!k) continue;
      ++scored;
      wrong += best.at(*k) != *r.label_destination;
    }
    out[d] = scored == 0 ? std::nullopt : std::optional<double>(double(wrong) / double(scored));
  }
  return out;
}

EvalReport make_report(std::span<const TripOutcome> trips, std::size_t skipped) {
  EvalReport r;
  r.route_accuracy = route_accuracy(trips);
  r.tuple_accuracy = time_weighted_accuracy(trips);
  const auto e = eta_error(trips);
  r.eta_mean_abs_error = e.mean_min;
  r.eta_median_abs_error = e.median_min;
  r.trips = trips.size();
  r.skipped = skipped;
  return r;
}

std::string to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["route_accuracy"] = r.route_accuracy;
  j["tuple_accuracy"] = r.tuple_accuracy;
  j["eta_mean_abs_error_min"] = r.eta_mean_abs_error;
  j["eta_median_abs_error_min"] = r.eta_median_abs_error;
  j["trips"] = r.trips;
  j["skipped"] = r.skipped;
  return j.dump();
}

std::string to_text(const EvalReport& r) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(4);
  out << "trips evaluated           " << r.trips << '\n'
      << "predictions skipped       " << r.skipped << '\n'
      << "route accuracy (records)  " << r.route_accuracy << '\n'
      << "route accuracy (time)     " << r.tuple_accuracy << '\n';
  out.precision(2);
  out << "ETA mean abs error        " << r.eta_mean_abs_error << " min\n"
      << "ETA median abs error      " << r.eta_median_abs_error << " min\n";
  return out.str();
}

std::vector<PredictionRow> read_predictions(std::istream& in) {
  return read_rows<PredictionRow>(in, kPredictionsHeader, 4, [](const auto& f, std::string_view line) {
    return PredictionRow{std::string(trim(f[0])), field_int(f[1], line), to_upper(trim(f[2])), field_int(f[3], line)};
  });
}

void write_prediction_row(std::ostream& out, const PredictionRow& row) {
  out << row.ship_id << ',' << row.timestamp << ',' << row.port << ',' << row.arrival << '\n';
}

std::vector<TruthRow> read_truth(std::istream& in) {
  return read_rows<TruthRow>(in, kTruthHeader, 4, [](const auto& f, std::string_view line) {
    return TruthRow{std::string(trim(f[0])), std::string(trim(f[1])), to_upper(trim(f[2])), field_int(f[3], line)};
  });
}

void write_truth(std::ostream& out, std::span<const TruthRow> rows) {
  out << kTruthHeader << '\n';
  for (const auto& r : rows) out << r.ship_id << ',' << r.trip_id << ',' << r.port << ',' << r.arrival << '\n';
}

EvalReport evaluate_rows(std::span<const PredictionRow> predictions, std::span<const TruthRow> truth) {
  // per ship, trips ordered by arrival
  std::map<std::string, std::vector<TripOutcome>> by_ship;
  for (const auto& t : truth) {
    TripTruth tt;
    tt.ship_id = t.ship_id;
    tt.trip_id = t.trip_id;
    tt.true_destination = t.port;
    tt.true_arrival = t.arrival;
    by_ship[t.ship_id].emplace_back(TripPredictions{}, std::move(tt));
  }
  for (auto& [ship, trips] : by_ship)
    std::sort(trips.begin(), trips.end(), [](const TripOutcome& a, const TripOutcome& b) {
      if (a.second.true_arrival != b.second.true_arrival) return a.second.true_arrival < b.second.true_arrival;
      return a.second.trip_id < b.second.trip_id;
    });

  std::vector<const PredictionRow*> rows;
  rows.reserve(predictions.size());
  for (const auto& p : predictions) rows.push_back(&p);
  std::stable_sort(rows.begin(), rows.end(), [](const PredictionRow* a, const PredictionRow* b) {
    if (a->ship_id != b->ship_id) return a->ship_id < b->ship_id;
    return a->timestamp < b->timestamp;
  });

  std::size_t skipped = 0;
  for (const PredictionRow* p : rows) {
    auto it = by_ship.find(p->ship_id);
    if (it == by_ship.end()) {
      ++skipped;
      continue;
    }
    auto trip = std::find_if(it->second.begin(), it->second.end(),
                             [&](const TripOutcome& t) { return t.second.true_arrival >= p->timestamp; });
    if (trip == it->second.end()) {
      ++skipped;
      continue;
    }
    AisRecord rec;
    rec.ship_id = p->ship_id;
    rec.timestamp = p->timestamp;
    trip->second.records.push_back(std::move(rec));
    trip->first.destinations.push_back(p->port);
    trip->first.arrivals.push_back(p->arrival);
  }

  std::vector<TripOutcome> all;
  for (auto& [ship, trips] : by_ship)
    for (auto& t : trips) {
      if (t.second.records.empty())
        throw Error(Errc::LengthMismatch, "no predictions for trip " + t.second.trip_id + " of ship " + ship);
      all.push_back(std::move(t));
    }
  return make_report(all, skipped);
}

}  // namespace aiscell
