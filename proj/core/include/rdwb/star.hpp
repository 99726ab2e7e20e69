#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "rdwb/ball.hpp"
#include "rdwb/group.hpp"
#include "rdwb/peripheral.hpp"

namespace rdwb {

struct StarConstants {
  int sigma = 0;
  int delta = 1;

  int kappa() const noexcept { return sigma + delta; }
  friend bool operator==(const StarConstants&, const StarConstants&) = default;
};

// A left coset gH_i, identified by its ShortLex-least member.
struct Coset {
  std::size_t peripheral = 0;
  Element key;

  friend bool operator==(const Coset&, const Coset&) = default;
  friend std::strong_ordering operator<=>(const Coset& a, const Coset& b) {
    if (auto c = a.key <=> b.key; c != 0) return c;
    return a.peripheral <=> b.peripheral;
  }
};

struct EntryExitRecord {
  Element A1, B2;  // side [A,B]
  Element B1, C2;  // side [B,C]
  Element C1, A2;  // side [C,A]
  bool excursion = false;  // a side left the neighbourhood and came back
};

struct CentralCosetResult {
  Coset coset;
  EntryExitRecord record;
  std::array<std::size_t, 3> pair_distances{};   // d(A1,A2), d(B1,B2), d(C1,C2)
  std::array<std::size_t, 6> coset_distances{};  // A1,B2,B1,C2,C1,A2 to the coset
};

// Where a side meets the sigma-neighbourhood of one coset.
struct SideHit {
  std::uint64_t coset = 0;
  Rank entry = 0;
  Rank exit = 0;
  bool excursion = false;
};

/// Coset bookkeeping over one enumerated ball for a fixed sigma.
///
/// Coset keys come from a union-find over peripheral-letter edges inside the
/// ball. For the built-in families every element x = k h with k the key
/// satisfies L(x) = L(k) + L(h), so the walk from x down to k stays inside
/// B(L(x)) and keys of ball elements are exact.
class StarGeometry {
 public:
  using CosetId = std::uint64_t;

  StarGeometry(std::shared_ptr<const BallIndex> ball, PeripheralStructure peripherals,
               int sigma);

  static std::shared_ptr<const StarGeometry> build(
      const GroupModel& model, const PeripheralStructure& peripherals, int sigma,
      int ball_radius, std::size_t budget = kDefaultBallBudget);

  const BallIndex& ball() const noexcept { return *ball_; }
  const std::shared_ptr<const BallIndex>& ball_ptr() const noexcept { return ball_; }
  const PeripheralStructure& peripherals() const noexcept { return peripherals_; }
  const GroupModel& model() const noexcept { return ball_->model(); }
  int sigma() const noexcept { return sigma_; }

  // Rank of a ball element; RangeError outside the ball.
  Rank rank(const Element& e) const;

  // Packed ids sort by (key rank, peripheral index), i.e. in Coset order.
  static CosetId pack(Rank key, std::size_t i) {
    return (static_cast<CosetId>(key) << 8) | static_cast<CosetId>(i);
  }
  static Rank id_key(CosetId id) { return static_cast<Rank>(id >> 8); }
  static std::size_t id_peripheral(CosetId id) { return static_cast<std::size_t>(id & 0xff); }

  Rank key_rank(std::size_t i, Rank x) const { return keys_[i][x]; }
  CosetId coset_id(std::size_t i, Rank x) const { return pack(keys_[i][x], i); }
  bool in_coset(Rank x, CosetId id) const {
    return keys_[id_peripheral(id)][x] == id_key(id);
  }
  Coset coset(CosetId id) const;
  CosetId id_of(const Coset& c) const;
  Coset coset_of(const Element& g, std::size_t i) const;

  // Sorted ids of cosets within sigma of v. ResourceError when the ball
  // cannot certify this (L(v) + sigma beyond the radius).
  std::span<const CosetId> neighborhood(Rank v) const;
  std::size_t coset_distance(Rank v, CosetId id) const;

  std::vector<Rank> path(Rank from, std::span<const Letter> word) const;
  // Vertices of the canonical geodesic from * q_{from^-1 to}.
  std::vector<Rank> side(Rank from, Rank to) const;
  // All geodesic vertex paths from -> to (at most `cap`).
  std::vector<std::vector<Rank>> all_sides(Rank from, Rank to, std::size_t cap = 20000) const;
  // Hits sorted by coset id.
  void hits(std::span<const Rank> path, std::vector<SideHit>& out) const;

  // Ranks at distance <= t from c, sorted.
  void ball_around(Rank c, int t, std::vector<Rank>& out) const;
  std::size_t distance(Rank x, Rank y) const;
  bool within(Rank x, Rank y, int t) const;

 private:
  std::shared_ptr<const BallIndex> ball_;
  PeripheralStructure peripherals_;
  int sigma_;
  std::vector<std::vector<Rank>> keys_;
  std::size_t nbhd_limit_ = 0;  // ranks below this have a neighbourhood
  std::vector<std::size_t> nbhd_offsets_;
  std::vector<CosetId> nbhd_ids_;
};

struct TriangleMatch {
  const SideHit* ab = nullptr;
  const SideHit* bc = nullptr;
  const SideHit* ca = nullptr;
};

// Calls fn(match) for every coset meeting all three sides, in coset order,
// until fn returns true. Returns whether fn stopped the scan.
template <typename Fn>
bool for_each_common_coset(std::span<const SideHit> ab, std::span<const SideHit> bc,
                           std::span<const SideHit> ca, Fn&& fn) {
  std::size_t i = 0, j = 0, k = 0;
  while (i < ab.size() && j < bc.size() && k < ca.size()) {
    const auto x = ab[i].coset, y = bc[j].coset, z = ca[k].coset;
    const auto m = std::max(x, std::max(y, z));
    if (x < m) { ++i; continue; }
    if (y < m) { ++j; continue; }
    if (z < m) { ++k; continue; }
    if (fn(TriangleMatch{&ab[i], &bc[j], &ca[k]})) return true;
    ++i, ++j, ++k;
  }
  return false;
}

// The strict conditions dist(A1,A2) < delta etc. for one common coset.
inline bool satisfies_delta(const StarGeometry& geo, const TriangleMatch& m, int delta) {
  return geo.within(m.ab->entry, m.ca->exit, delta - 1) &&
         geo.within(m.bc->entry, m.ab->exit, delta - 1) &&
         geo.within(m.ca->entry, m.bc->exit, delta - 1);
}

std::optional<TriangleMatch> central_match(const StarGeometry& geo,
                                           std::span<const SideHit> ab,
                                           std::span<const SideHit> bc,
                                           std::span<const SideHit> ca, int delta);

std::optional<std::pair<Element, Element>> entrance_exit(const StarGeometry& geo,
                                                         const Element& from,
                                                         std::span<const Letter> side_word,
                                                         const Coset& coset);
// Side along the canonical geodesic from `from` to `to`.
std::optional<std::pair<Element, Element>> entrance_exit(const StarGeometry& geo,
                                                         const Element& from,
                                                         const Element& to,
                                                         const Coset& coset);

std::optional<CentralCosetResult> find_central_coset(const StarGeometry& geo,
                                                     const Element& A, const Element& B,
                                                     const Element& C,
                                                     const StarConstants& constants);
// Every qualifying coset, in key order.
std::vector<CentralCosetResult> find_central_cosets(const StarGeometry& geo,
                                                    const Element& A, const Element& B,
                                                    const Element& C,
                                                    const StarConstants& constants);

enum class GeodesicMode { canonical, exhaustive };

struct StarVerifyOptions {
  GeodesicMode mode = GeodesicMode::canonical;
  int workers = 0;
  std::size_t budget = kDefaultBallBudget;
};

struct StarReport {
  bool pass = true;
  StarConstants constants;
  int radius = 0;
  std::optional<std::array<Element, 3>> counterexample;
  std::uint64_t triangles_checked = 0;
  std::uint64_t excursion_triangles = 0;
};

/// Precomputed sides for every ordered vertex pair of B(radius).
class StarVerifier {
 public:
  StarVerifier(std::shared_ptr<const StarGeometry> geometry, int radius,
               GeodesicMode mode = GeodesicMode::canonical, int workers = 0);

  StarReport run(int delta, int workers = 0) const;

 private:
  std::span<const std::vector<SideHit>> variants(std::size_t a, std::size_t b) const {
    const std::size_t p = a * n_ + b;
    return {sides_.data() + offsets_[p], offsets_[p + 1] - offsets_[p]};
  }

  std::shared_ptr<const StarGeometry> geo_;
  int radius_;
  std::size_t n_;
  std::vector<std::size_t> offsets_;
  std::vector<std::vector<SideHit>> sides_;
};

StarReport verify_star(const GroupModel& model, const PeripheralStructure& peripherals,
                       const StarConstants& constants, int radius,
                       const StarVerifyOptions& options = {});

std::optional<StarConstants> calibrate_constants(const GroupModel& model,
                                                 const PeripheralStructure& peripherals,
                                                 int radius, int sigma_max, int delta_max,
                                                 const StarVerifyOptions& options = {});

}  // namespace rdwb
