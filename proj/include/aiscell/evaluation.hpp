#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aiscell/record.hpp"

namespace aiscell {

struct TripTruth {
  std::string ship_id;
  std::string trip_id;
  std::vector<AisRecord> records;  // ordered by timestamp
  std::string true_destination;
  EpochSeconds true_arrival = 0;
};

/// What the engine reported for each record of one trip, in record order.
struct TripPredictions {
  std::vector<std::string> destinations;
  std::vector<EpochSeconds> arrivals;
};

using TripOutcome = std::pair<TripPredictions, TripTruth>;

/// Fraction of records whose reported destination is correct, over all
/// trips. Throws Error(LengthMismatch).
double route_accuracy(std::span<const TripOutcome> trips);

/// Same as route_accuracy but each record weighs the event time until the
/// next record (the last record until the true arrival).
double time_weighted_accuracy(std::span<const TripOutcome> trips);

struct EtaError {
  double mean_min = 0.0;
  double median_min = 0.0;
};

/// Absolute arrival-time error per record, in minutes.
EtaError eta_error(std::span<const TripOutcome> trips);

enum class Dimension { Type, Speed, Departure, Draught, Course, Heading };

inline constexpr Dimension kAllDimensions[] = {Dimension::Type,    Dimension::Speed,  Dimension::Departure,
                                               Dimension::Draught, Dimension::Course, Dimension::Heading};

std::string_view to_string(Dimension d);

/// Error rate of a one-dimension "most frequent destination" predictor
/// trained and scored on the same labeled set. nullopt when no record
/// carries the dimension.
std::map<Dimension, std::optional<double>> dimension_diagnostic(std::span<const AisRecord> train_set,
                                                                double speed_bucket);

struct EvalReport {
  double route_accuracy = 0.0;
  double tuple_accuracy = 0.0;
  double eta_mean_abs_error = 0.0;    // minutes
  double eta_median_abs_error = 0.0;  // minutes
  std::size_t trips = 0;
  std::size_t skipped = 0;
};

EvalReport make_report(std::span<const TripOutcome> trips, std::size_t skipped);

/// Single-line JSON object with stable key names.
std::string to_json(const EvalReport& r);
std::string to_text(const EvalReport& r);

// File-level evaluation -------------------------------------------------

inline constexpr std::string_view kPredictionsHeader = "SHIP_ID,TIMESTAMP,PREDICTED_PORT,PREDICTED_ARRIVAL";
inline constexpr std::string_view kTruthHeader = "SHIP_ID,TRIP_ID,ARRIVAL_PORT,ARRIVAL_TIME";

struct PredictionRow {
  std::string ship_id;
  EpochSeconds timestamp = 0;
  std::string port;
  EpochSeconds arrival = 0;
};

struct TruthRow {
  std::string ship_id;
  std::string trip_id;
  std::string port;
  EpochSeconds arrival = 0;
};

std::vector<PredictionRow> read_predictions(std::istream& in);
void write_prediction_row(std::ostream& out, const PredictionRow& row);
std::vector<TruthRow> read_truth(std::istream& in);
void write_truth(std::ostream& out, std::span<const TruthRow> rows);

/// Assigns each prediction to the earliest trip of its ship that arrives
/// at or after the prediction timestamp. Predictions matching no trip are
/// counted as skipped; a trip without predictions throws
/// Error(LengthMismatch).
EvalReport evaluate_rows(std::span<const PredictionRow> predictions, std::span<const TruthRow> truth);

}  // namespace aiscell
