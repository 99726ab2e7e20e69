#include "rdwb/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rdwb {

namespace {

double max_y(const std::vector<Point2>& points) {
  double m = 0.0;
  for (const auto& p : points) m = std::max(m, p.y);
  return m;
}

bool feasible(const LinearEnvelope& e, const std::vector<Point2>& points) {
  return std::all_of(points.begin(), points.end(),
                     [&](const Point2& p) { return e.dominates(p.x, p.y); });
}

}  // namespace

LinearEnvelope least_squares_envelope(const std::vector<Point2>& points) {
  LinearEnvelope e;
  if (points.empty()) return e;
  const double n = static_cast<double>(points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : points) {
    sx += p.x;
    sy += p.y;
    sxx += p.x * p.x;
    sxy += p.x * p.y;
  }
  const double denom = n * sxx - sx * sx;
  if (denom > 0) {
    e.slope = (n * sxy - sx * sy) / denom;
    e.intercept = (sy - e.slope * sx) / n;
  }
  if (denom <= 0 || e.slope < 0) {
    e.slope = 0;
    e.intercept = max_y(points);
    return e;
  }
  double shift = -std::numeric_limits<double>::infinity();
  for (const auto& p : points) shift = std::max(shift, p.y - e(p.x));
  e.intercept += shift;
  return e;
}

LinearEnvelope minimal_linear_envelope(const std::vector<Point2>& points) {
  LinearEnvelope best{0.0, max_y(points)};
  if (points.empty()) return best;
  auto cost = [&](const LinearEnvelope& e) {
    double s = 0;
    for (const auto& p : points) s += e(p.x);
    return s;
  };
  double best_cost = cost(best);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const auto& a = points[i];
      const auto& b = points[j];
      if (a.x == b.x) continue;
      LinearEnvelope e;
      e.slope = (b.y - a.y) / (b.x - a.x);
      if (e.slope < 0) continue;
      e.intercept = a.y - e.slope * a.x;
      if (!feasible(e, points)) continue;
      const double c = cost(e);
      if (c < best_cost - 1e-12) {
        best = e;
        best_cost = c;
      }
    }
  }
  return best;
}

}  // namespace rdwb
