#include "rdwb/peripheral.hpp"

#include <algorithm>
#include <cctype>

#include "rdwb/error.hpp"

namespace rdwb {

PeripheralStructure::PeripheralStructure(GroupModel model,
                                         std::vector<PeripheralSubgroup> subgroups)
    : model_(std::move(model)), subgroups_(std::move(subgroups)) {
  if (subgroups_.empty()) {
    throw UsageError("a peripheral structure needs at least one subgroup");
  }
  for (auto& s : subgroups_) {
    std::sort(s.generators.begin(), s.generators.end());
    s.generators.erase(std::unique(s.generators.begin(), s.generators.end()),
                       s.generators.end());
    std::vector<bool> mask(static_cast<std::size_t>(model_.alphabet_size()), false);
    for (int g : s.generators) {
      if (g < 0 || g >= model_.generator_count()) {
        throw AlphabetError("peripheral generator " + std::to_string(g) +
                            " is not a generator of " + model_.descriptor());
      }
      mask[model_.letter_for(g, true)] = true;
      mask[model_.letter_for(g, false)] = true;
    }
    letter_mask_.push_back(std::move(mask));
  }
}

PeripheralStructure PeripheralStructure::factors(const GroupModel& model) {
  std::vector<PeripheralSubgroup> subs;
  for (auto [first, count] : model.factor_generator_ranges()) {
    PeripheralSubgroup s;
    for (int g = first; g < first + count; ++g) s.generators.push_back(g);
    subs.push_back(std::move(s));
  }
  return PeripheralStructure(model, std::move(subs));
}

PeripheralStructure PeripheralStructure::trivial(const GroupModel& model) {
  return PeripheralStructure(model, {PeripheralSubgroup{}});
}

PeripheralStructure PeripheralStructure::parse(const GroupModel& model,
                                               std::string_view descriptor) {
  std::string text;
  for (char c : descriptor) {
    if (!std::isspace(static_cast<unsigned char>(c))) text += c;
  }
  if (text == "factors") return factors(model);
  if (text == "trivial") return trivial(model);
  std::vector<PeripheralSubgroup> subs;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text[pos] != '<') {
      throw UsageError("peripheral descriptor '" + std::string(descriptor) +
                       "': expected '<'");
    }
    const std::size_t close = text.find('>', pos);
    if (close == std::string::npos) {
      throw UsageError("peripheral descriptor '" + std::string(descriptor) +
                       "': missing '>'");
    }
    PeripheralSubgroup s;
    for (std::size_t i = pos + 1; i < close; ++i) {
      if (text[i] == ',') continue;
      const Letter l = model.letter_from_name(text[i]);
      s.generators.push_back(model.generator_of(l));
    }
    subs.push_back(std::move(s));
    pos = close + 1;
    if (pos < text.size()) {
      if (text[pos] != ',') {
        throw UsageError("peripheral descriptor '" + std::string(descriptor) +
                         "': expected ','");
      }
      ++pos;
    }
  }
  return PeripheralStructure(model, std::move(subs));
}

bool PeripheralStructure::contains(std::size_t i, const Element& e) const {
  const auto& mask = letter_mask_.at(i);
  return std::all_of(e.word().begin(), e.word().end(),
                     [&](Letter l) { return l < mask.size() && mask[l]; });
}

std::vector<Rank> PeripheralStructure::members(std::size_t i,
                                               const BallIndex& ball) const {
  std::vector<Rank> out;
  out.push_back(0);
  // Normal forms of members only use subgroup letters, so a BFS tree walk
  // restricted to those letters reaches all of them.
  for (std::size_t r = 1; r < ball.size(); ++r) {
    const auto rank = static_cast<Rank>(r);
    const Rank p = ball.parent(rank);
    if (contains_letter(i, ball.parent_letter(rank)) &&
        std::binary_search(out.begin(), out.end(), p)) {
      out.push_back(rank);
    }
  }
  return out;
}

std::string PeripheralStructure::name(std::size_t i) const {
  std::string out = "<";
  const auto& gens = subgroups_.at(i).generators;
  for (std::size_t k = 0; k < gens.size(); ++k) {
    if (k) out += ',';
    out += model_.letter_name(model_.letter_for(gens[k], true));
  }
  out += '>';
  return out;
}

std::string PeripheralStructure::descriptor() const {
  std::string out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (i) out += ',';
    out += name(i);
  }
  return out;
}

}  // namespace rdwb
