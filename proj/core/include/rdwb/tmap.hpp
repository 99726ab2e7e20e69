#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rdwb/envelope.hpp"
#include "rdwb/group.hpp"
#include "rdwb/peripheral.hpp"
#include "rdwb/star.hpp"

namespace rdwb {

enum class TMapKind { z2_median, polygrowth_shortest_side, derived_from_star };

const char* tmap_kind_name(TMapKind kind);

// T(g, h) = (a, g', h') with (g', h') in H_i x H_i.
struct TMapValue {
  Element a, g_prime, h_prime;
  std::size_t peripheral = 0;

  friend bool operator==(const TMapValue&, const TMapValue&) = default;
};

// Coordinatewise median of 0, g, h in a free-abelian model.
TMapValue tmap_z2(const GroupModel& model, const Element& g, const Element& h);

// The triangle (1, g, h) is brought to its ShortLex-least relabeling; there
// a shortest side is picked (ties: [1,G] < [1,H] < [G,H]) and a = G if G is
// one of its endpoints, 1 otherwise.
TMapValue tmap_polygrowth(const GroupModel& model, const Element& g, const Element& h);

// Central decomposition of the canonical relabeling whose centers lie closest
// to the entrance/exit points (first in order on ties), transported back:
// a = g1, g' = eta, h' = eta'. StructuralError when there is none.
TMapValue tmap_from_star(const StarGeometry& geo, const StarConstants& constants,
                         const Element& g, const Element& h);

struct TMap {
  TMapKind kind = TMapKind::z2_median;
  GroupModel model;
  PeripheralStructure peripherals;
  std::function<TMapValue(const Element&, const Element&)> evaluate;
  // Claimed bounds, where the construction comes with them.
  std::function<double(int)> Q1, Q2;
  std::string Q1_text, Q2_text;
  // A Q2 excess is reported but does not fail the check.
  bool Q2_advisory = false;

  TMapValue operator()(const Element& g, const Element& h) const { return evaluate(g, h); }
};

TMap make_z2_tmap(const GroupModel& model);
TMap make_polygrowth_tmap(const GroupModel& model);
// Evaluations are memoised per canonical triangle.
TMap make_star_tmap(std::shared_ptr<const StarGeometry> geo, const StarConstants& constants);

struct TMapViolation {
  Element g, h;
  std::string rule;  // "swap", "rebase" or "membership"
  TMapValue expected, actual;
};

struct TMapCountRow {
  Element g;
  int r = 0;
  std::size_t count = 0;
  double Q2 = 0.0;  // claimed value, or the fitted envelope without a claim
};

struct TMapReport {
  TMapKind kind = TMapKind::z2_median;
  int radius = 0;
  std::size_t pairs_checked = 0;

  bool condition_i = true;
  std::optional<TMapViolation> counterexample;  // ShortLex-least (g, h)

  std::vector<std::size_t> max_h_prime;  // max L(h') with L(h) = r, by r
  bool condition_ii = true;
  LinearEnvelope Q1_fit;

  std::vector<TMapCountRow> counts;     // sorted by (g, r)
  std::vector<std::size_t> max_count;   // by r
  bool condition_iii = true;            // no count above the claim
  std::size_t excess = 0;               // (g, r) cells above the claim
  LinearEnvelope Q2_fit;

  bool pass = true;
};

// Exhaustive over g, h in B(radius).
TMapReport verify_tmap(const TMap& tmap, int radius, int workers = 0);

}  // namespace rdwb
