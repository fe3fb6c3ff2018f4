#pragma once

#include <cstddef>
#include <deque>
#include <string>
#include <vector>

namespace aiscell {

/// Bounded per-ship memory of raw destination predictions, oldest first.
class ShipHistory {
 public:
  explicit ShipHistory(std::string ship_id = {}, std::size_t capacity = 64);

  void append(std::string port);
  void reset() { window_.clear(); }

  const std::string& ship_id() const { return ship_id_; }
  std::size_t capacity() const { return capacity_; }
  const std::deque<std::string>& window() const { return window_; }

 private:
  std::string ship_id_;
  std::size_t capacity_;
  std::deque<std::string> window_;
};

struct Run {
  std::string port;
  std::size_t length = 0;
  std::size_t end = 0;  // one past the last window index of the run
};

/// Maximal runs of equal consecutive values, ranked longest first and,
/// among equal lengths, most recent first.
std::vector<Run> ranked_runs(const std::deque<std::string>& window);

/// Appends `raw` and reports it if it belongs to one of the `k` top-ranked
/// runs; otherwise reports the port of the top-ranked run.
std::string filter_prediction(ShipHistory& hist, const std::string& raw, int k);

}  // namespace aiscell
