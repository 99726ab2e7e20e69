#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "rdwb/ball.hpp"
#include "rdwb/group.hpp"

namespace rdwb {

/// A peripheral subgroup generated by a subset of the model's generators.
///
/// For every built-in family an element lies in such a subgroup iff its
/// normal form only uses the subset's letters, and its word length in the
/// subgroup equals its word length in G.
struct PeripheralSubgroup {
  std::vector<int> generators;  // sorted global generator indices

  bool trivial() const noexcept { return generators.empty(); }
};

class PeripheralStructure {
 public:
  PeripheralStructure(GroupModel model, std::vector<PeripheralSubgroup> subgroups);

  // One subgroup per top-level free/direct factor.
  static PeripheralStructure factors(const GroupModel& model);
  // The single trivial subgroup.
  static PeripheralStructure trivial(const GroupModel& model);
  // "factors", "trivial", or a list such as "<a>,<b,c>" ("<>" is trivial).
  static PeripheralStructure parse(const GroupModel& model,
                                   std::string_view descriptor);

  const GroupModel& model() const noexcept { return model_; }
  std::size_t size() const noexcept { return subgroups_.size(); }
  const PeripheralSubgroup& operator[](std::size_t i) const {
    return subgroups_.at(i);
  }

  bool contains_letter(std::size_t i, Letter l) const {
    return letter_mask_[i][l];
  }
  bool contains(std::size_t i, const Element& e) const;
  // H_i ∩ B(r) in rank order.
  std::vector<Rank> members(std::size_t i, const BallIndex& ball) const;

  std::string name(std::size_t i) const;
  std::string descriptor() const;

 private:
  GroupModel model_;
  std::vector<PeripheralSubgroup> subgroups_;
  std::vector<std::vector<bool>> letter_mask_;
};

}  // namespace rdwb
