#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "aiscell/error.hpp"
#include "aiscell/evaluation.hpp"
#include "aiscell/synth.hpp"
#include "support.hpp"

using namespace aiscell;
using aiscell::testing::labeled;
using aiscell::testing::make_record;

namespace {

// A trip of n records one minute apart, arriving at `arrival`.
TripTruth trip(const std::string& ship, int n, EpochSeconds arrival = 100000, const std::string& dest = "CEUTA") {
  TripTruth t;
  t.ship_id = ship;
  t.trip_id = ship + "-1";
  t.true_destination = dest;
  t.true_arrival = arrival;
  for (int i = 0; i < n; ++i) t.records.push_back(make_record(36, 0, 90, 12, 1000 + 60 * i));
  return t;
}

TripPredictions predictions(int correct, int wrong, const std::vector<EpochSeconds>& arrivals = {}) {
  TripPredictions p;
  for (int i = 0; i < correct; ++i) p.destinations.push_back("CEUTA");
  for (int i = 0; i < wrong; ++i) p.destinations.push_back("TANGER");
  p.arrivals = arrivals;
  if (p.arrivals.empty()) p.arrivals.assign(p.destinations.size(), 100000);
  return p;
}

}  // namespace

TEST(RouteAccuracy, SpecExamples) {
  std::vector<TripOutcome> one{{predictions(8, 2), trip("A", 10)}};
  EXPECT_DOUBLE_EQ(route_accuracy(one), 0.8);

  std::vector<TripOutcome> two{{predictions(8, 2), trip("A", 10)}, {predictions(10, 0), trip("B", 10)}};
  EXPECT_DOUBLE_EQ(route_accuracy(two), 0.9);

  std::vector<TripOutcome> none{{predictions(0, 10), trip("A", 10)}};
  EXPECT_DOUBLE_EQ(route_accuracy(none), 0.0);
}

TEST(RouteAccuracy, WeightedByRecordCount) {
  std::vector<TripOutcome> v{{predictions(1, 1), trip("A", 2)}, {predictions(8, 0), trip("B", 8)}};
  EXPECT_DOUBLE_EQ(route_accuracy(v), 0.9);
}

TEST(RouteAccuracy, LengthMismatch) {
  std::vector<TripOutcome> v{{predictions(3, 0), trip("A", 4)}};
  try {
    route_accuracy(v);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::LengthMismatch);
  }
  EXPECT_THROW(eta_error(v), Error);
}

TEST(TimeWeightedAccuracy, WeighsByTimeToNextRecord) {
  // records at 1000, 1060, 1120; arrival 1420 -> weights 60, 60, 300
  TripTruth t = trip("A", 3, 1420);
  std::vector<TripOutcome> v{{predictions(2, 1), t}};
  EXPECT_DOUBLE_EQ(time_weighted_accuracy(v), 120.0 / 420.0);
  std::vector<TripOutcome> last_right{{TripPredictions{{"TANGER", "TANGER", "CEUTA"}, {0, 0, 0}}, t}};
  EXPECT_DOUBLE_EQ(time_weighted_accuracy(last_right), 300.0 / 420.0);
}

TEST(EtaError, SpecExamples) {
  const EpochSeconds arr = 100000;
  std::vector<TripOutcome> a{{predictions(3, 0, {arr + 600, arr - 1200, arr + 1800}), trip("A", 3, arr)}};
  EXPECT_DOUBLE_EQ(eta_error(a).mean_min, 20.0);
  EXPECT_DOUBLE_EQ(eta_error(a).median_min, 20.0);

  std::vector<TripOutcome> b{{predictions(1, 0, {arr}), trip("A", 1, arr)}};
  EXPECT_DOUBLE_EQ(eta_error(b).mean_min, 0.0);
  EXPECT_DOUBLE_EQ(eta_error(b).median_min, 0.0);

  std::vector<TripOutcome> c{{predictions(3, 0, {arr, arr, arr + 3600}), trip("A", 3, arr)}};
  EXPECT_DOUBLE_EQ(eta_error(c).mean_min, 20.0);
  EXPECT_DOUBLE_EQ(eta_error(c).median_min, 0.0);
}

TEST(EvalMetrics, PerfectAndPermutationInvariant) {
  std::mt19937_64 rng(3);
  std::vector<TripOutcome> v;
  for (int i = 0; i < 30; ++i) {
    const int n = 1 + int(rng() % 20), ok = int(rng() % (n + 1));
    std::vector<EpochSeconds> arr;
    for (int k = 0; k < n; ++k) arr.push_back(100000 + EpochSeconds(rng() % 7200) - 3600);
    v.push_back({predictions(ok, n - ok, arr), trip("S" + std::to_string(i), n)});
  }
  const EvalReport before = make_report(v, 0);
  std::shuffle(v.begin(), v.end(), rng);
  const EvalReport after = make_report(v, 0);
  EXPECT_DOUBLE_EQ(before.route_accuracy, after.route_accuracy);
  EXPECT_DOUBLE_EQ(before.tuple_accuracy, after.tuple_accuracy);
  EXPECT_DOUBLE_EQ(before.eta_mean_abs_error, after.eta_mean_abs_error);
  EXPECT_DOUBLE_EQ(before.eta_median_abs_error, after.eta_median_abs_error);

  for (auto& [p, t] : v) {
    p.destinations.assign(t.records.size(), t.true_destination);
    p.arrivals.assign(t.records.size(), t.true_arrival);
  }
  const EvalReport perfect = make_report(v, 0);
  EXPECT_EQ(perfect.route_accuracy, 1.0);
  EXPECT_EQ(perfect.tuple_accuracy, 1.0);
  EXPECT_EQ(perfect.eta_mean_abs_error, 0.0);
  EXPECT_EQ(perfect.eta_median_abs_error, 0.0);
}

TEST(Report, JsonHasStableKeys) {
  EvalReport r{0.5, 0.25, 12.5, 3.0, 7, 2};
  const std::string j = to_json(r);
  EXPECT_EQ(j.find('\n'), std::string::npos);
  for (const char* key : {"\"route_accuracy\"", "\"tuple_accuracy\"", "\"eta_mean_abs_error_min\"",
                          "\"eta_median_abs_error_min\"", "\"trips\"", "\"skipped\""})
    EXPECT_NE(j.find(key), std::string::npos) << key;
  EXPECT_NE(to_text(r).find("0.5"), std::string::npos);
}

TEST(DimensionDiagnostic, DepartureDeterminesDestination) {
  std::vector<AisRecord> set;
  std::mt19937_64 rng(1);
  const char* deps[] = {"A", "B", "C"};
  const char* dests[] = {"X", "Y", "Z"};
  for (int i = 0; i < 300; ++i) {
    const int k = int(rng() % 3);
    AisRecord r = make_record(36, 0, double(rng() % 360), 10.0 + double(rng() % 10), 1000, 70, deps[k]);
    set.push_back(labeled(r, dests[k], 2000));
  }
  const auto d = dimension_diagnostic(set, 0.5);
  EXPECT_EQ(d.at(Dimension::Departure), 0.0);
  EXPECT_GT(*d.at(Dimension::Speed), 0.0);
  EXPECT_GT(*d.at(Dimension::Type), 0.0);
  for (const auto& [dim, rate] : d) {
    ASSERT_TRUE(rate.has_value()) << to_string(dim);
    EXPECT_GE(*rate, 0.0);
    EXPECT_LE(*rate, 1.0);
  }
}

TEST(DimensionDiagnostic, SingleRecordIsSelfPredicted) {
  std::vector<AisRecord> one{labeled(make_record(36, 0, 90), "CEUTA", 5000)};
  one[0].heading.reset();
  const auto d = dimension_diagnostic(one, 0.5);
  EXPECT_EQ(d.at(Dimension::Heading), std::nullopt);
  for (Dimension dim : {Dimension::Type, Dimension::Speed, Dimension::Departure, Dimension::Draught, Dimension::Course})
    EXPECT_EQ(d.at(dim), 0.0) << to_string(dim);
}

TEST(DimensionDiagnostic, TiesGoToSmallestName) {
  // type 70 sees B once and A once; A wins, so the B record is wrong
  std::vector<AisRecord> set{labeled(make_record(36, 0, 90), "B", 5000), labeled(make_record(36, 0, 90), "A", 5000)};
  EXPECT_DOUBLE_EQ(*dimension_diagnostic(set, 0.5).at(Dimension::Type), 0.5);
}

TEST(EvaluateRows, MatchesPredictionsToTripsByShipAndTime) {
  std::vector<TruthRow> truth{{"S1", "S1-1", "CEUTA", 5000}, {"S1", "S1-2", "TANGER", 9000}, {"S2", "S2-1", "GENOA", 4000}};
  std::vector<PredictionRow> preds{{"S1", 1000, "CEUTA", 5000},  {"S1", 2000, "TANGER", 5600},
                                   {"S1", 6000, "TANGER", 9000}, {"S2", 1000, "GENOA", 4600},
                                   {"S2", 8000, "GENOA", 9000},  {"S3", 1000, "GENOA", 0}};
  const EvalReport r = evaluate_rows(preds, truth);
  EXPECT_EQ(r.trips, 3u);
  EXPECT_EQ(r.skipped, 2u);
  EXPECT_DOUBLE_EQ(r.route_accuracy, 3.0 / 4.0);
  EXPECT_DOUBLE_EQ(r.eta_mean_abs_error, 5.0);

  std::vector<TruthRow> shuffled{truth[2], truth[0], truth[1]};
  const EvalReport s = evaluate_rows(preds, shuffled);
  EXPECT_EQ(to_json(r), to_json(s));
}

TEST(EvaluateRows, MissingTripIsLengthMismatch) {
  std::vector<TruthRow> truth{{"S1", "S1-1", "CEUTA", 5000}, {"S2", "S2-1", "GENOA", 4000}};
  std::vector<PredictionRow> preds{{"S1", 1000, "CEUTA", 5000}};
  try {
    evaluate_rows(preds, truth);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::LengthMismatch);
  }
}

TEST(EvaluateRows, FileRoundTrip) {
  std::stringstream p;
  p << kPredictionsHeader << '\n';
  write_prediction_row(p, {"S1", 1000, "CEUTA", 5000});
  const auto rows = read_predictions(p);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].port, "CEUTA");
  EXPECT_EQ(rows[0].arrival, 5000);

  std::vector<TruthRow> truth{{"S1", "S1-1", "CEUTA", 5000}};
  std::stringstream t;
  write_truth(t, truth);
  const auto back = read_truth(t);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].trip_id, "S1-1");
}
