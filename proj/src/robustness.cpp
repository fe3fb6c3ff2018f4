#include "aiscell/robustness.hpp"

#include <algorithm>

namespace aiscell {

ShipHistory::ShipHistory(std::string ship_id, std::size_t capacity)
    : ship_id_(std::move(ship_id)), capacity_(std::max<std::size_t>(1, capacity)) {}

void ShipHistory::append(std::string port) {
  window_.push_back(std::move(port));
  while (window_.size() > capacity_) window_.pop_front();
}

std::vector<Run> ranked_runs(const std::deque<std::string>& window) {
  std::vector<Run> runs;
  for (std::size_t i = 0; i < window.size(); ++i) {
    if (!runs.empty() && runs.back().port == window[i]) {
      ++runs.back().length;
      runs.back().end = i + 1;
    } else {
      runs.push_back(Run{window[i], 1, i + 1});
    }
  }
  std::sort(runs.begin(), runs.end(), [](const Run& a, const Run& b) {
    if (a.length != b.length) return a.length > b.length;
    return a.end > b.end;
  });
  return runs;
}

std::string filter_prediction(ShipHistory& hist, const std::string& raw, int k) {
  hist.append(raw);
  const auto runs = ranked_runs(hist.window());
  const std::size_t top = std::min<std::size_t>(runs.size(), std::size_t(std::max(1, k)));
  for (std::size_t i = 0; i < top; ++i)
    if (runs[i].port == raw) return raw;
  return runs.front().port;
}

}  // namespace aiscell
