#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "rdwb/decomposition.hpp"
#include "rdwb/envelope.hpp"
#include "rdwb/finite_function.hpp"
#include "rdwb/polynomial.hpp"

namespace rdwb {

// P_i for subgroups whose RD polynomial is known outright: 1 for the trivial
// subgroup, r+1 for an infinite cyclic one, sqrt(n) for a finite cyclic one.
std::optional<PolynomialBound> default_peripheral_bound(const PeripheralStructure& peripherals,
                                                        std::size_t i);

// Fitted constants the chain relies on.
struct ChainFits {
  double C1 = 0.0, C2 = 0.0;  // |D_g| <= C1 r1 + C2
  double K1 = 0.0;            // x-multiplicity <= K1 r1
  LinearEnvelope y_mult;      // y-multiplicity <= y_mult(r1)

  double Q(double r1) const { return (C1 * r1 + C2) * (K1 * r1) * y_mult(r1); }
};

// Fits over every (p, r1, r2) with 1 <= r1 <= r1_max, 1 <= r2 <= r2_max.
ChainFits fit_chain_constants(const StarGeometry& geo, const StarConstants& constants,
                              int r1_max, int r2_max, int workers = 0);

struct ChainStep {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = true;
};

// X and Y for one d = (g1, eta, g2) in H_i.
struct ChainTerm {
  ChainTerm(const GroupModel& m) : X(m), Y(m) {}

  Element g, g1, eta, g2;
  std::size_t peripheral = 0;
  RealFunction X, Y;
};

struct ChainReport {
  int r1 = 0, r2 = 0, p = 0;
  double norm_sq = 0.0;  // ||(x*y)_p||^2
  double P_value = 0.0;
  double Q_value = 0.0;
  double final_bound = 0.0;
  std::vector<ChainStep> steps;
  std::vector<ChainTerm> terms;
  bool structural_failure = false;
  std::vector<std::pair<Element, Element>> missing;  // (h, k) with no decomposition
  bool pass = true;
};

// Memoises decomposition indices across traces sharing one geometry.
class DecompositionCache {
 public:
  const DecompositionIndex& get(const StarGeometry& geo, const StarConstants& constants,
                                const Element& g, int p, int r1, int r2);

 private:
  std::map<std::tuple<Element, int, int, int>, DecompositionIndex> cache_;
};

inline constexpr double kChainTolerance = 1e-9;

ChainReport trace_proof_chain(const StarGeometry& geo, const StarConstants& constants,
                              const RealFunction& x, int r1, const RealFunction& y, int r2,
                              int p, const ChainFits& fits,
                              const std::vector<PolynomialBound>& peripheral_bounds,
                              DecompositionCache* cache = nullptr);

struct ComplexReductionReport {
  double norm_x = 0.0, norm_phi = 0.0;
  double norm_x_phi = 0.0;
  std::array<double, 4> part_norms{};     // ||phi_i||
  std::array<double, 4> part_images{};    // ||x * phi_i||
  double sum_parts = 0.0;                 // sum ||x * phi_i||
  double bound = 0.0;                     // 2 P ||x|| ||phi||
  bool parts_orthogonal = true;           // ||phi||^2 = sum ||phi_i||^2
  bool premise = true;                    // ||x*phi_i|| <= P ||x|| ||phi_i||
  bool triangle_ok = true;                // ||x*phi|| <= sum ||x*phi_i||
  bool bound_ok = true;                   // ||x*phi|| <= 2 P ||x|| ||phi||
  bool pass = true;
};

ComplexReductionReport complex_reduction_check(const RealFunction& x, const ComplexFunction& phi,
                                               double P_value);

}  // namespace rdwb
