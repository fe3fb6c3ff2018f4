#include "aiscell/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "aiscell/error.hpp"

namespace aiscell {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

// Slack for grid extents that are exact multiples of the granularity but
// do not divide exactly in binary floating point (e.g. 16 / 0.005).
constexpr double kExtentEps = 1e-9;

std::int32_t cells_along(double lo, double hi, double g) {
  return std::max<std::int32_t>(1, std::int32_t(std::ceil((hi - lo) / g - kExtentEps)));
}

}  // namespace

bool Coord::valid() const noexcept {
  return std::isfinite(lat) && std::isfinite(lon) && lat >= -90.0 && lat <= 90.0 &&
         lon >= -180.0 && lon <= 180.0;
}

void GridSpec::validate() const {
  if (!(granularity > 0.0) || !std::isfinite(granularity))
    throw Error(Errc::InvalidConfig, "grid granularity must be > 0");
  if (!(lat_min < lat_max) || !(lon_min < lon_max))
    throw Error(Errc::InvalidConfig, "grid bounding box is empty");
  if (!Coord{lat_min, lon_min}.valid() || !Coord{lat_max, lon_max}.valid())
    throw Error(Errc::InvalidConfig, "grid bounding box outside valid coordinates");
}

std::int32_t GridSpec::rows() const { return cells_along(lat_min, lat_max, granularity); }
std::int32_t GridSpec::cols() const { return cells_along(lon_min, lon_max, granularity); }

bool GridSpec::contains(const Coord& pos) const noexcept {
  return pos.lat >= lat_min && pos.lat <= lat_max && pos.lon >= lon_min && pos.lon <= lon_max;
}

CellId cell_of(const Coord& pos, const GridSpec& grid) {
  if (!grid.contains(pos))
    throw Error(Errc::OutOfBounds, "position (" + std::to_string(pos.lat) + ", " +
                                       std::to_string(pos.lon) + ") outside grid");
  auto row = std::int32_t(std::floor((pos.lat - grid.lat_min) / grid.granularity));
  auto col = std::int32_t(std::floor((pos.lon - grid.lon_min) / grid.granularity));
  return CellId{std::clamp(row, 0, grid.rows() - 1), std::clamp(col, 0, grid.cols() - 1)};
}

Coord cell_center(CellId cell, const GridSpec& grid) {
  return Coord{grid.lat_min + (cell.row + 0.5) * grid.granularity,
               grid.lon_min + (cell.col + 0.5) * grid.granularity};
}

bool cell_valid(CellId cell, const GridSpec& grid) noexcept {
  return cell.row >= 0 && cell.col >= 0 && cell.row < grid.rows() && cell.col < grid.cols();
}

double haversine_nm(const Coord& a, const Coord& b) {
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double sdphi = std::sin((phi2 - phi1) / 2.0);
  const double sdlambda = std::sin((b.lon - a.lon) * kDegToRad / 2.0);
  const double h = sdphi * sdphi + std::cos(phi1) * std::cos(phi2) * sdlambda * sdlambda;
  return 2.0 * kEarthRadiusNm * std::asin(std::min(1.0, std::sqrt(h)));
}

double bearing_deg(const Coord& a, const Coord& b) {
  if (a == b) throw Error(Errc::Undefined, "bearing between identical points");
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double dlambda = (b.lon - a.lon) * kDegToRad;
  const double y = std::sin(dlambda) * std::cos(phi2);
  const double x = std::cos(phi1) * std::sin(phi2) - std::sin(phi1) * std::cos(phi2) * std::cos(dlambda);
  return normalize_deg(std::atan2(y, x) * kRadToDeg);
}

double normalize_deg(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  // fmod of a tiny negative can round back up to exactly 360
  return r >= 360.0 ? 0.0 : r;
}

double angular_diff(double a, double b) {
  const double d = std::fmod(std::fabs(a - b), 360.0);
  return std::min(d, 360.0 - d);
}

std::vector<CellId> ring_cells(CellId center, int radius, const GridSpec& grid) {
  std::vector<CellId> out;
  if (radius < 0) return out;
  if (radius == 0) {
    if (cell_valid(center, grid)) out.push_back(center);
    return out;
  }
  const std::int32_t rows = grid.rows();
  const std::int32_t cols = grid.cols();
  const std::int32_t r0 = std::max(0, center.row - radius);
  const std::int32_t r1 = std::min(rows - 1, center.row + radius);
  for (std::int32_t r = r0; r <= r1; ++r) {
    const bool edge_row = (r == center.row - radius) || (r == center.row + radius);
    if (edge_row) {
      const std::int32_t c0 = std::max(0, center.col - radius);
      const std::int32_t c1 = std::min(cols - 1, center.col + radius);
      for (std::int32_t c = c0; c <= c1; ++c) out.push_back(CellId{r, c});
    } else {
      if (center.col - radius >= 0) out.push_back(CellId{r, center.col - radius});
      if (center.col + radius < cols) out.push_back(CellId{r, center.col + radius});
    }
  }
  return out;
}

Coord destination_point(const Coord& start, double bearing, double distance_nm) {
  const double delta = distance_nm / kEarthRadiusNm;
  const double theta = bearing * kDegToRad;
  const double phi1 = start.lat * kDegToRad;
  const double lambda1 = start.lon * kDegToRad;
  const double phi2 =
      std::asin(std::sin(phi1) * std::cos(delta) + std::cos(phi1) * std::sin(delta) * std::cos(theta));
  const double lambda2 =
      lambda1 + std::atan2(std::sin(theta) * std::sin(delta) * std::cos(phi1),
                           std::cos(delta) - std::sin(phi1) * std::sin(phi2));
  double lon = lambda2 * kRadToDeg;
  lon = std::fmod(lon + 540.0, 360.0) - 180.0;
  return Coord{phi2 * kRadToDeg, lon};
}

Coord interpolate(const Coord& a, const Coord& b, double f) {
  if (f <= 0.0) return a;
  if (f >= 1.0) return b;
  const double delta = haversine_nm(a, b) / kEarthRadiusNm;
  if (delta < 1e-15) return a;
  const double phi1 = a.lat * kDegToRad, lambda1 = a.lon * kDegToRad;
  const double phi2 = b.lat * kDegToRad, lambda2 = b.lon * kDegToRad;
  const double wa = std::sin((1.0 - f) * delta) / std::sin(delta);
  const double wb = std::sin(f * delta) / std::sin(delta);
  const double x = wa * std::cos(phi1) * std::cos(lambda1) + wb * std::cos(phi2) * std::cos(lambda2);
  const double y = wa * std::cos(phi1) * std::sin(lambda1) + wb * std::cos(phi2) * std::sin(lambda2);
  const double z = wa * std::sin(phi1) + wb * std::sin(phi2);
  return Coord{std::atan2(z, std::sqrt(x * x + y * y)) * kRadToDeg, std::atan2(y, x) * kRadToDeg};
}

}  // namespace aiscell
