#pragma once

#include <cstdint>
#include <optional>

#include "aiscell/geo.hpp"

namespace aiscell {

/// Expands square rings around `start` until a ring holds at least one
/// trained cell, then picks the one whose center lies closest to `course`
/// as seen from the center of `start`. Ties go to the larger weight, then
/// to row-major order. `start` itself is returned whenever it is trained.
///
/// `trained(CellId) -> bool` and `weight(CellId) -> uint64` are supplied by
/// the owning model.
template <class Trained, class Weight>
std::optional<CellId> nearest_trained_cell(const GridSpec& grid, CellId start, double course,
                                           int max_radius, Trained&& trained, Weight&& weight) {
  if (trained(start)) return start;
  const Coord origin = cell_center(start, grid);
  for (int r = 1; r <= max_radius; ++r) {
    std::optional<CellId> best;
    double best_diff = 0.0;
    std::uint64_t best_weight = 0;
    for (CellId c : ring_cells(start, r, grid)) {
      if (!trained(c)) continue;
      const double diff = angular_diff(bearing_deg(origin, cell_center(c, grid)), course);
      const std::uint64_t w = weight(c);
      // ring_cells is row-major, so keeping the incumbent on a full tie
      // yields the row-major winner
      if (!best || diff < best_diff || (diff == best_diff && w > best_weight)) {
        best = c;
        best_diff = diff;
        best_weight = w;
      }
    }
    if (best) return best;
  }
  return std::nullopt;
}

}  // namespace aiscell
