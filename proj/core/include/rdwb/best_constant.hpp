#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rdwb/ball.hpp"
#include "rdwb/finite_function.hpp"

namespace rdwb {

struct BestConstantOptions {
  std::size_t restarts = 50;
  double tol = 1e-10;
  std::size_t max_iterations = 20000;
  std::uint64_t seed = 0;
  int workers = 0;
};

/// Bracket for sup ||(x*y)_p|| over nonnegative unit x on S(r1), y on S(r2).
struct BestConstantEstimate {
  explicit BestConstantEstimate(const GroupModel& model) : x(model), y(model) {}

  int r1 = 0, r2 = 0, p = 0;
  double lower = 0.0;
  double upper = 0.0;
  RealFunction x, y;  // pair attaining `lower`
  std::size_t restarts = 0;
  double tolerance = 0.0;
};

BestConstantEstimate best_constant(const BallIndex& ball, int r1, int r2, int p,
                                   const BestConstantOptions& options = {});
BestConstantEstimate best_constant(const GroupModel& model, int r1, int r2, int p,
                                   const BestConstantOptions& options = {});

// Grid search over products of nonnegative unit spheres followed by a
// pattern-search ascent. Only for |S(r1)| * |S(r2)| <= 36.
double brute_constant(const GroupModel& model, int r1, int r2, int p, int grid_resolution);

struct RdProfileCell {
  int r1 = 0, r2 = 0, p = 0;
  double lower = 0.0;
  double upper = 0.0;
  std::size_t restarts = 0;
};

struct RdProfile {
  std::vector<RdProfileCell> cells;  // ordered by (r1, r2, p)
  std::vector<double> C;             // C(r) from lower bounds
  std::vector<double> C_upper;       // same maximum over certified upper bounds
};

RdProfile rd_profile(const GroupModel& model, int r_max, const BestConstantOptions& options = {},
                     std::size_t budget = kDefaultBallBudget);

}  // namespace rdwb
