#pragma once

#include "rdwb/ball.hpp"
#include "rdwb/finite_function.hpp"

namespace rdwb {

struct OpNormOptions {
  double tol = 1e-8;
  std::size_t max_iterations = 200000;
  std::size_t budget = kDefaultBallBudget;
};

// Largest singular value of phi -> x*phi from l2(B(R)) to l2(B(r+R)), where
// supp x lies in B(r); a lower bound for the operator norm of x that grows
// with R. Never below ||x||_2 (phi = delta_1).
double op_norm_lower(const RealFunction& x, int R, const OpNormOptions& options = {});
// Same, on a ball of radius >= r + R supplied by the caller.
double op_norm_lower(const RealFunction& x, int R, const BallIndex& ball,
                     const OpNormOptions& options = {});

}  // namespace rdwb
