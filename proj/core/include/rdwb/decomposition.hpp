#pragma once

#include <compare>
#include <cstddef>
#include <vector>

#include "rdwb/envelope.hpp"
#include "rdwb/star.hpp"

namespace rdwb {

// g = g1 eta g2, h = g1 eta' g3, k = h^-1 g = g3^-1 eta'' g2, eta = eta' eta''.
struct CentralDecomposition {
  Element g1, g2, g3;
  Element eta, eta_prime, eta_second;
  std::size_t peripheral = 0;
  Coset coset;
  EntryExitRecord witness;
};

// Rank-level decomposition: u = g1 eta and v = g1 eta' (all in one coset).
struct RawDecomposition {
  StarGeometry::CosetId coset = 0;
  Rank g1 = 0, u = 0, v = 0;
  Rank A1 = 0, B2 = 0, B1 = 0, C2 = 0, C1 = 0, A2 = 0;
  bool excursion = false;
};

// Ball radius that certifies every triangle (1, h, g) with L(g) <= p, L(h) <= r1.
inline int decomposition_radius(int p, int r1, const StarConstants& c) {
  return p + r1 + c.kappa();
}

// Triangle (1, h, g) with sides q_h, h q_{h^-1 g} and q_g. Appends every
// tuple over every coset meeting the three sigma-neighbourhoods.
void raw_decompositions(const StarGeometry& geo, int kappa, Rank g, Rank h,
                        std::vector<RawDecomposition>& out);

// Sorted by (coset, g1, eta', eta).
std::vector<CentralDecomposition> central_decompositions(const StarGeometry& geo,
                                                         const StarConstants& constants,
                                                         const Element& g, const Element& h);

struct DecompositionPart {
  Element g1, eta, g2;
  std::size_t peripheral = 0;

  friend bool operator==(const DecompositionPart&, const DecompositionPart&) = default;
  friend auto operator<=>(const DecompositionPart&, const DecompositionPart&) = default;
};

struct CompletionTriple {
  Element eta_prime, eta_second, g3;

  friend bool operator==(const CompletionTriple&, const CompletionTriple&) = default;
  friend auto operator<=>(const CompletionTriple&, const CompletionTriple&) = default;
};

// Views attached to one d = (g1, eta, g2) of D_g.
struct DecompositionView {
  std::vector<CompletionTriple> C;                   // C_d
  std::vector<std::pair<Element, Element>> hk;       // (h, k) for each triple of C
  std::vector<std::pair<Element, Element>> E;        // E_d
  std::vector<Element> E_prime, E_second, U;         // E'_d, E''_d, U_d
};

struct DecompositionIndex {
  Element g;
  int p = 0, r1 = 0, r2 = 0;
  std::vector<DecompositionPart> D;                  // D_g, sorted
  std::vector<Element> L, R;                         // left and right parts
  std::vector<std::pair<Element, Element>> LR;
  std::vector<DecompositionView> views;              // parallel to D
  std::size_t triangles = 0;                         // pairs (h, k) considered
  std::vector<Element> incomplete;                   // h with no decomposition
};

DecompositionIndex decomposition_index(const StarGeometry& geo, const StarConstants& constants,
                                       const Element& g, int p, int r1, int r2);

struct CountWitness {
  std::size_t count = 0;
  Element g;
  int p = 0;
  int r2 = 0;
};

struct CountBoundFit {
  double C1 = 0.0;
  double C2 = 0.0;
  std::vector<CountWitness> max_observed;  // indexed by r1

  double bound(int r1) const { return C1 * r1 + C2; }
};

// max |D_g| over g in B(p_max), per r1 <= r1_max (maximised over r2).
CountBoundFit count_bound_fit(const StarGeometry& geo, const StarConstants& constants,
                              int p_max, int r1_max, int workers = 0);
CountBoundFit count_bound_fit(const GroupModel& model, const PeripheralStructure& peripherals,
                              const StarConstants& constants, int p_max, int r1_max,
                              int workers = 0, std::size_t budget = kDefaultBallBudget);

// How often a single x(h) or y(k) is repeated across the tuples of Delta,
// for fixed (p, r1, r2); maxima are taken over p and r2 <= r2_max.
struct MultiplicityFit {
  double K1 = 0.0;          // x-multiplicity <= K1 r1
  LinearEnvelope y;         // y-multiplicity <= y(r1)
  std::vector<std::size_t> max_x, max_y;  // indexed by r1 (entry 0 unused)
};

MultiplicityFit multiplicity_fit(const StarGeometry& geo, const StarConstants& constants,
                                 int r1_max, int r2_max, int workers = 0);

}  // namespace rdwb
