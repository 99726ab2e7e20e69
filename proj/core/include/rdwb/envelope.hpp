#pragma once

#include <vector>

namespace rdwb {

// y <= slope * x + intercept on every fitted point.
struct LinearEnvelope {
  double slope = 0.0;
  double intercept = 0.0;

  double operator()(double x) const { return slope * x + intercept; }
  bool dominates(double x, double y) const { return y <= (*this)(x) + 1e-9 * (1.0 + y); }
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Least-squares line shifted up by its largest residual. A negative slope is
// replaced by the horizontal line through the maximum.
LinearEnvelope least_squares_envelope(const std::vector<Point2>& points);

// Nonnegative-slope line above all points minimising the sum of its values
// at the points' abscissae (the optimum passes through hull points).
LinearEnvelope minimal_linear_envelope(const std::vector<Point2>& points);

}  // namespace rdwb
