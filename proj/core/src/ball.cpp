#include "rdwb/ball.hpp"

#include <algorithm>
#include <string>

#include "rdwb/error.hpp"

namespace rdwb {

BallIndex BallIndex::enumerate(const GroupModel& model, int radius,
                               std::size_t budget) {
  if (radius < 0) throw UsageError("ball radius must be non-negative");
  BallIndex ball(model, radius);
  const auto letters = static_cast<Letter>(model.alphabet_size());
  ball.length_.push_back(0);
  ball.parent_.push_back(kNoRank);
  ball.letter_.push_back(0);
  ball.sphere_offsets_ = {0, 1};

  for (int k = 0; k < radius; ++k) {
    const std::size_t begin = ball.sphere_offsets_[k];
    const std::size_t end = ball.sphere_offsets_[k + 1];
    for (std::size_t x = begin; x < end; ++x) {
      const Element ex = ball.element(static_cast<Rank>(x));
      for (Letter l = 0; l < letters; ++l) {
        const Element y = model.right_multiply(ex, l);
        // Each element of S(k+1) is discovered exactly once: from the prefix
        // of its normal form, by the last letter of that normal form.
        if (y.length() == static_cast<std::size_t>(k) + 1 &&
            y.word().back() == l &&
            std::equal(ex.word().begin(), ex.word().end(), y.word().begin())) {
          if (ball.length_.size() >= budget) {
            throw ResourceError("ball budget of " + std::to_string(budget) +
                                " elements exceeded while enumerating B(" +
                                std::to_string(radius) + ") of " +
                                model.descriptor());
          }
          ball.length_.push_back(static_cast<std::uint16_t>(k + 1));
          ball.parent_.push_back(static_cast<Rank>(x));
          ball.letter_.push_back(l);
        }
      }
    }
    ball.sphere_offsets_.push_back(ball.length_.size());
  }
  ball.build_table_and_inverses();
  return ball;
}

BallIndex BallIndex::from_records(const GroupModel& model, int radius,
                                  std::vector<Rank> parents,
                                  std::vector<Letter> letters) {
  if (parents.empty() || parents.size() != letters.size() ||
      parents[0] != kNoRank) {
    throw IntegrityError("ball records must start with the identity");
  }
  BallIndex ball(model, radius);
  const std::size_t n = parents.size();
  ball.length_.assign(n, 0);
  ball.sphere_offsets_ = {0};
  for (std::size_t r = 1; r < n; ++r) {
    if (parents[r] >= r || letters[r] >= model.alphabet_size()) {
      throw IntegrityError("ball record " + std::to_string(r) +
                           " has an invalid parent or letter");
    }
    const int len = ball.length_[parents[r]] + 1;
    if (len < ball.length_[r - 1] || len > radius) {
      throw IntegrityError("ball record " + std::to_string(r) +
                           " breaks the sphere order");
    }
    if (len > ball.length_[r - 1]) ball.sphere_offsets_.push_back(r);
    ball.length_[r] = static_cast<std::uint16_t>(len);
  }
  ball.sphere_offsets_.push_back(n);
  while (static_cast<int>(ball.sphere_offsets_.size()) < radius + 2) {
    ball.sphere_offsets_.push_back(n);
  }
  ball.parent_ = std::move(parents);
  ball.letter_ = std::move(letters);

  // Every record must be a canonical extension of its parent, in ShortLex
  // order, and the set must be closed under taking neighbors inside B(r).
  for (std::size_t r = 1; r < n; ++r) {
    const Element e = ball.element(static_cast<Rank>(r));
    if (model.normalize(e.word()) != e) {
      throw IntegrityError("ball record " + std::to_string(r) +
                           " is not a normal form");
    }
    if (r > 1 && ball.length_[r] == ball.length_[r - 1] &&
        !(ball.element(static_cast<Rank>(r - 1)) < e)) {
      throw IntegrityError("ball record " + std::to_string(r) +
                           " is out of ShortLex order");
    }
  }
  ball.build_table_and_inverses();
  return ball;
}

void BallIndex::build_table_and_inverses() {
  const std::size_t n = size();
  table_.assign(n * letters_, kNoRank);
  for (std::size_t r = 1; r < n; ++r) {
    table_[static_cast<std::size_t>(parent_[r]) * letters_ + letter_[r]] =
        static_cast<Rank>(r);
    table_[r * letters_ + model_.inverse_letter(letter_[r])] = parent_[r];
  }
  for (std::size_t x = 0; x < n; ++x) {
    Element ex;
    bool have_ex = false;
    for (std::size_t l = 0; l < letters_; ++l) {
      Rank& slot = table_[x * letters_ + l];
      if (slot != kNoRank) continue;
      if (!have_ex) {
        ex = element(static_cast<Rank>(x));
        have_ex = true;
      }
      const Element y = model_.right_multiply(ex, static_cast<Letter>(l));
      if (y.length() > static_cast<std::size_t>(radius_)) continue;
      const Rank target = walk(0, y.word());
      if (target == kNoRank) {
        throw IntegrityError("ball is missing element " + model_.format(y));
      }
      slot = target;
    }
  }
  inverse_.assign(n, kNoRank);
  Word inv;
  for (std::size_t x = 0; x < n; ++x) {
    inv.clear();
    Rank cur = static_cast<Rank>(x);
    while (cur != 0) {
      inv.push_back(model_.inverse_letter(letter_[cur]));
      cur = parent_[cur];
    }
    // `inv` now spells the inverse of x; it is geodesic so the walk stays
    // inside the ball.
    inverse_[x] = walk(0, inv);
  }
}

std::vector<std::size_t> BallIndex::sphere_sizes() const {
  std::vector<std::size_t> out;
  for (int k = 0; k <= radius_; ++k) out.push_back(sphere_size(k));
  return out;
}

Word BallIndex::word(Rank r) const {
  Word w(length_[r]);
  for (std::size_t i = w.size(); i > 0; --i) {
    w[i - 1] = letter_[r];
    r = parent_[r];
  }
  return w;
}

Rank BallIndex::walk(Rank from, std::span<const Letter> word) const {
  Rank cur = from;
  for (Letter l : word) {
    if (cur == kNoRank) return kNoRank;
    cur = neighbor(cur, l);
  }
  return cur;
}

std::optional<Rank> BallIndex::find(const Element& e) const {
  if (e.length() > static_cast<std::size_t>(radius_)) return std::nullopt;
  for (Letter l : e.word()) {
    if (l >= letters_) return std::nullopt;
  }
  Rank cur = 0;
  for (Letter l : e.word()) {
    const Rank next = table_[static_cast<std::size_t>(cur) * letters_ + l];
    // Normal forms only follow BFS tree edges.
    if (next == kNoRank || parent_[next] != cur || letter_[next] != l) {
      return std::nullopt;
    }
    cur = next;
  }
  return cur;
}

Rank BallIndex::rank_of(const Element& e) const {
  if (auto r = find(e)) return *r;
  throw RangeError("element " + model_.format(e) + " lies outside B(" +
                   std::to_string(radius_) + ")");
}

Word BallIndex::canonical_geodesic(const Element& g) const {
  return word(rank_of(g));
}

bool BallIndex::same_records(const BallIndex& other) const {
  return model_.same_as(other.model_) && radius_ == other.radius_ &&
         parent_ == other.parent_ && letter_ == other.letter_ &&
         length_ == other.length_;
}

std::size_t growth_function(const GroupModel& model, int radius,
                            std::size_t budget) {
  return BallIndex::enumerate(model, radius, budget).size();
}

}  // namespace rdwb
