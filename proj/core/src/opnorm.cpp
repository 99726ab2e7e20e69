#include "rdwb/opnorm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rdwb {

double op_norm_lower(const RealFunction& x, int R, const OpNormOptions& options) {
  if (R < 0) throw UsageError("op_norm_lower: R must be nonnegative");
  std::size_t r = 0;
  for (const auto& [e, v] : x) r = std::max(r, e.length());
  const auto ball = BallIndex::enumerate(x.model(), static_cast<int>(r) + R, options.budget);
  return op_norm_lower(x, R, ball, options);
}

double op_norm_lower(const RealFunction& x, int R, const BallIndex& ball,
                     const OpNormOptions& options) {
  if (R < 0) throw UsageError("op_norm_lower: R must be nonnegative");
  if (x.empty()) return 0.0;
  if (!x.model().same_as(ball.model())) throw UsageError("op_norm_lower: model mismatch");
  std::size_t r = 0;
  for (const auto& [e, v] : x) r = std::max(r, e.length());
  if (ball.radius() < static_cast<int>(r) + R) {
    throw ResourceError("op_norm_lower needs a ball of radius " + std::to_string(r + R));
  }
  const std::size_t nd = ball.sphere_end(R);
  const std::size_t no = ball.sphere_end(static_cast<int>(r) + R);

  // translates[j][y] = rank of h_j * y, filled along BFS parents
  std::vector<double> coef;
  std::vector<std::vector<Rank>> translates;
  for (const auto& [h, v] : x) {
    std::vector<Rank> t(nd);
    t[0] = ball.rank_of(h);
    for (std::size_t y = 1; y < nd; ++y) {
      const auto yr = static_cast<Rank>(y);
      t[y] = ball.neighbor(t[ball.parent(yr)], ball.parent_letter(yr));
    }
    coef.push_back(v);
    translates.push_back(std::move(t));
  }

  std::vector<double> v(nd, 1.0 / std::sqrt(static_cast<double>(nd)));
  std::vector<double> w(no), u(nd);
  double estimate = 0.0;
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    std::fill(w.begin(), w.end(), 0.0);
    for (std::size_t j = 0; j < coef.size(); ++j) {
      const auto& t = translates[j];
      for (std::size_t y = 0; y < nd; ++y) w[t[y]] += coef[j] * v[y];
    }
    double s = 0.0;
    for (double z : w) s += z * z;
    const double next = std::sqrt(s);
    std::fill(u.begin(), u.end(), 0.0);
    for (std::size_t j = 0; j < coef.size(); ++j) {
      const auto& t = translates[j];
      for (std::size_t y = 0; y < nd; ++y) u[y] += coef[j] * w[t[y]];
    }
    double un = 0.0;
    for (double z : u) un += z * z;
    un = std::sqrt(un);
    const bool done = std::abs(next - estimate) <= options.tol * next;
    estimate = std::max(estimate, next);
    if (done || un == 0.0) break;
    for (std::size_t y = 0; y < nd; ++y) v[y] = u[y] / un;
  }
  return std::max(estimate, norm(x));
}

}  // namespace rdwb
