#pragma once

#include <cstdint>
#include <compare>
#include <vector>

namespace aiscell {

/// Mean Earth radius in nautical miles.
inline constexpr double kEarthRadiusNm = 3440.065;

struct Coord {
  double lat = 0.0;
  double lon = 0.0;

  bool valid() const noexcept;
  friend bool operator==(const Coord&, const Coord&) = default;
};

/// Rectangular lat/lon grid anchored at (lat_min, lon_min). Cells are never
/// preallocated; rows()*cols() is only the nominal capacity.
struct GridSpec {
  double lat_min = 30.0;
  double lat_max = 46.0;
  double lon_min = -6.0;
  double lon_max = 36.5;
  double granularity = 1.0;

  /// Throws Error(InvalidConfig) when the box is empty or granularity <= 0.
  void validate() const;
  std::int32_t rows() const;
  std::int32_t cols() const;
  std::uint64_t capacity() const { return std::uint64_t(rows()) * std::uint64_t(cols()); }
  bool contains(const Coord& pos) const noexcept;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct CellId {
  std::int32_t row = 0;
  std::int32_t col = 0;

  friend auto operator<=>(const CellId&, const CellId&) = default;
  friend bool operator==(const CellId&, const CellId&) = default;
};

/// Packs a cell address into a single hash key.
inline std::uint64_t cell_key(CellId c) noexcept {
  return (std::uint64_t(std::uint32_t(c.row)) << 32) | std::uint32_t(c.col);
}
inline CellId cell_from_key(std::uint64_t key) noexcept {
  return CellId{std::int32_t(key >> 32), std::int32_t(key & 0xffffffffu)};
}

/// Cell containing `pos`. Points on the max edges clamp into the last
/// row/column. Throws Error(OutOfBounds) outside the box.
CellId cell_of(const Coord& pos, const GridSpec& grid);

Coord cell_center(CellId cell, const GridSpec& grid);

bool cell_valid(CellId cell, const GridSpec& grid) noexcept;

/// Great-circle distance on a sphere of radius kEarthRadiusNm.
double haversine_nm(const Coord& a, const Coord& b);

/// Initial great-circle bearing from a to b in [0, 360), clockwise from
/// north. Throws Error(Undefined) when a == b.
double bearing_deg(const Coord& a, const Coord& b);

/// Smallest absolute difference between two directions, in [0, 180].
double angular_diff(double a, double b);

/// Normalizes any angle into [0, 360).
double normalize_deg(double deg);

/// In-bounds cells at Chebyshev distance exactly `radius` from `center`,
/// row-major. radius 0 yields {center}.
std::vector<CellId> ring_cells(CellId center, int radius, const GridSpec& grid);

/// Point reached after travelling `distance_nm` from `start` along the
/// great circle with initial bearing `bearing`.
Coord destination_point(const Coord& start, double bearing, double distance_nm);

/// Point at fraction `f` of the great-circle arc from a to b.
Coord interpolate(const Coord& a, const Coord& b, double f);

}  // namespace aiscell
