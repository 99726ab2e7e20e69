#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "rdwb/group.hpp"

namespace rdwb {

// Position of an element in a BallIndex. Ranks follow ShortLex order.
using Rank = std::uint32_t;
inline constexpr Rank kNoRank = std::numeric_limits<Rank>::max();

inline constexpr std::size_t kDefaultBallBudget = 5'000'000;

/// The closed word-metric ball B(r), enumerated breadth first.
///
/// Elements are stored implicitly: each non-identity element keeps its BFS
/// parent and the last letter of its normal form, which is its canonical
/// (ShortLex-least) geodesic. A right-multiplication table by every letter
/// makes walks inside the ball allocation free.
class BallIndex {
 public:
  static BallIndex enumerate(const GroupModel& model, int radius,
                             std::size_t budget = kDefaultBallBudget);

  // Rebuilds an index from per-element (parent, last letter) records in rank
  // order. Throws IntegrityError unless the records describe exactly B(radius).
  static BallIndex from_records(const GroupModel& model, int radius,
                                std::vector<Rank> parents,
                                std::vector<Letter> letters);

  const GroupModel& model() const noexcept { return model_; }
  int radius() const noexcept { return radius_; }
  std::size_t size() const noexcept { return length_.size(); }

  std::size_t sphere_begin(int k) const { return sphere_offsets_.at(k); }
  std::size_t sphere_end(int k) const { return sphere_offsets_.at(k + 1); }
  std::size_t sphere_size(int k) const { return sphere_end(k) - sphere_begin(k); }
  std::vector<std::size_t> sphere_sizes() const;

  int length(Rank r) const { return length_[r]; }
  Rank parent(Rank r) const { return parent_[r]; }
  Letter parent_letter(Rank r) const { return letter_[r]; }
  Word word(Rank r) const;
  Element element(Rank r) const { return Element::from_normal_form(word(r)); }

  std::optional<Rank> find(const Element& e) const;
  // Throws RangeError when `e` lies outside the ball.
  Rank rank_of(const Element& e) const;

  Rank neighbor(Rank r, Letter l) const {
    return table_[static_cast<std::size_t>(r) * letters_ + l];
  }
  // Follows `word` from `from`; kNoRank as soon as the walk leaves the ball.
  Rank walk(Rank from, std::span<const Letter> word) const;
  Rank inverse(Rank r) const { return inverse_[r]; }

  // ShortLex-least geodesic from the identity, rebuilt from BFS parents.
  Word canonical_geodesic(const Element& g) const;

  // Same model, radius and per-element records.
  bool same_records(const BallIndex& other) const;

 private:
  BallIndex(GroupModel model, int radius)
      : model_(std::move(model)), radius_(radius),
        letters_(static_cast<std::size_t>(model_.alphabet_size())) {}

  void build_table_and_inverses();

  GroupModel model_;
  int radius_ = 0;
  std::size_t letters_ = 0;
  std::vector<std::uint16_t> length_;
  std::vector<Rank> parent_;
  std::vector<Letter> letter_;
  std::vector<std::size_t> sphere_offsets_;
  std::vector<Rank> table_;
  std::vector<Rank> inverse_;
};

inline BallIndex enumerate_ball(const GroupModel& model, int radius,
                                std::size_t budget = kDefaultBallBudget) {
  return BallIndex::enumerate(model, radius, budget);
}

inline Word canonical_geodesic(const BallIndex& ball, const Element& g) {
  return ball.canonical_geodesic(g);
}

// f(r) = |B(r)|.
std::size_t growth_function(const GroupModel& model, int radius,
                            std::size_t budget = kDefaultBallBudget);

}  // namespace rdwb
