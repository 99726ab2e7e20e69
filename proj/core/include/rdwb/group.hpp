#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rdwb {

// Letters are numbered by their position in the model's generator order, so
// comparing letter ids compares letters in that order.
using Letter = std::uint8_t;
using Word = std::vector<Letter>;

/// A group element stored as its normal form.
///
/// Normal forms of every built-in family are the ShortLex-least geodesic
/// words, so `length()` is the word length and the derived ordering of
/// elements is ShortLex.
class Element {
 public:
  Element() = default;

  // The caller guarantees `normal_form` is already normalized.
  static Element from_normal_form(Word normal_form) {
    Element e;
    e.word_ = std::move(normal_form);
    return e;
  }

  const Word& word() const noexcept { return word_; }
  std::size_t length() const noexcept { return word_.size(); }
  bool is_identity() const noexcept { return word_.empty(); }

  friend bool operator==(const Element&, const Element&) = default;
  friend std::strong_ordering operator<=>(const Element& a,
                                          const Element& b) noexcept {
    if (a.word_.size() != b.word_.size()) {
      return a.word_.size() <=> b.word_.size();
    }
    return a.word_ <=> b.word_;
  }

 private:
  Word word_;
};

enum class Family { kFree, kFreeAbelian, kCyclic, kFreeProduct, kDirectProduct };

namespace detail {
struct ModelData;
}

/// A finitely generated group with a confluent normal form.
///
/// Models are immutable and cheap to copy (shared state). Composite models
/// number their generators by concatenating the factors' generators; the
/// i-th generator is named 'a'+i and its inverse 'A'+i.
class GroupModel {
 public:
  static constexpr int kMaxGenerators = 26;

  static GroupModel free(int rank);
  static GroupModel free_abelian(int rank);
  static GroupModel cyclic(int order);
  static GroupModel free_product(std::vector<GroupModel> factors);
  static GroupModel direct_product(std::vector<GroupModel> factors);

  // Parses a compositional descriptor such as
  // "free-product(free-abelian(1), free-abelian(1))". `order` lists every
  // letter once ("aAbB"); empty means the default a < A < b < B < ...
  static GroupModel parse(std::string_view descriptor,
                          std::string_view order = {});

  GroupModel with_order(std::string_view order) const;

  Family family() const;
  const std::vector<GroupModel>& factors() const;
  // Global generator index range [first, first + count) of each top-level
  // factor; a leaf family reports itself as the single factor.
  std::vector<std::pair<int, int>> factor_generator_ranges() const;
  // Parameter of a leaf family (rank or order); 0 for composites.
  int parameter() const;

  std::string descriptor() const;
  std::string order_string() const;
  int generator_count() const;
  int alphabet_size() const;

  Letter inverse_letter(Letter l) const;
  int generator_of(Letter l) const;
  // 0 for generators of infinite order, n for a cyclic(n) generator.
  int generator_order(int generator) const;
  bool is_positive(Letter l) const;
  Letter letter_for(int generator, bool positive) const;
  char letter_name(Letter l) const;
  Letter letter_from_name(char name) const;

  // Accepts concatenated letter names with optional whitespace; "1" or ""
  // is the empty word.
  Word parse_word(std::string_view text) const;
  std::string format_word(std::span<const Letter> word) const;
  std::string format(const Element& e) const;
  Element parse_element(std::string_view text) const;

  Element identity() const { return Element(); }
  Element normalize(std::span<const Letter> word) const;
  Element multiply(const Element& a, const Element& b) const;
  Element inverse(const Element& a) const;
  Element right_multiply(const Element& a, Letter l) const;
  Element generator_element(Letter l) const;
  std::size_t word_length(const Element& a) const { return a.length(); }
  // Word metric: word_length(a^{-1} b).
  std::size_t distance(const Element& a, const Element& b) const;

  // Coordinates of an element of a free-abelian model.
  std::vector<long> abelian_coordinates(const Element& e) const;
  Element from_abelian_coordinates(std::span<const long> coords) const;

  // Same descriptor and generator order.
  bool same_as(const GroupModel& other) const;

  // Throws UsageError if `e` uses letters outside this alphabet.
  void check_element(const Element& e) const;

 private:
  explicit GroupModel(std::shared_ptr<const detail::ModelData> data)
      : data_(std::move(data)) {}

  std::shared_ptr<const detail::ModelData> data_;
};

}  // namespace rdwb

template <>
struct std::hash<rdwb::Element> {
  std::size_t operator()(const rdwb::Element& e) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto l : e.word()) {
      h ^= l;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h ^ e.length());
  }
};
