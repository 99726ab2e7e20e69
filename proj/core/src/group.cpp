#include "rdwb/group.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <string>

#include "rdwb/error.hpp"

namespace rdwb {
namespace detail {

struct Node {
  Family family = Family::kFree;
  int parameter = 0;
  int first_gen = 0;
  int gen_count = 0;
  std::vector<Node> children;
  std::vector<int> child_of_gen;  // composite only; indexed by gen - first_gen
  std::vector<Letter> letters_sorted;
};

struct Alphabet {
  int generators = 0;
  std::vector<int> gen_of;
  std::vector<bool> positive;
  std::vector<Letter> inverse;
  std::vector<Letter> pos_letter;
  std::vector<Letter> neg_letter;
};

struct ModelData {
  Node root;
  Alphabet alpha;
  std::vector<GroupModel> factors;
  std::string descriptor;
};

}  // namespace detail

namespace {

using detail::Alphabet;
using detail::ModelData;
using detail::Node;

char generator_name(int gen, bool positive) {
  return static_cast<char>((positive ? 'a' : 'A') + gen);
}

const char* family_name(Family f) {
  switch (f) {
    case Family::kFree:
      return "free";
    case Family::kFreeAbelian:
      return "free-abelian";
    case Family::kCyclic:
      return "cyclic";
    case Family::kFreeProduct:
      return "free-product";
    case Family::kDirectProduct:
      return "direct-product";
  }
  return "?";
}

std::string node_descriptor(const Node& n) {
  std::string out = family_name(n.family);
  out += '(';
  if (n.family == Family::kFreeProduct || n.family == Family::kDirectProduct) {
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (i) out += ',';
      out += node_descriptor(n.children[i]);
    }
  } else {
    out += std::to_string(n.parameter);
  }
  out += ')';
  return out;
}

void shift_generators(Node& n, int offset) {
  n.first_gen += offset;
  for (auto& c : n.children) shift_generators(c, offset);
}

void assign_letters(Node& n, const Alphabet& a) {
  n.letters_sorted.clear();
  for (int l = 0; l < 2 * a.generators; ++l) {
    const int g = a.gen_of[l];
    if (g >= n.first_gen && g < n.first_gen + n.gen_count) {
      n.letters_sorted.push_back(static_cast<Letter>(l));
    }
  }
  for (auto& c : n.children) assign_letters(c, a);
}

Alphabet make_alphabet(int generators, std::string_view order) {
  Alphabet a;
  a.generators = generators;
  const int size = 2 * generators;
  a.gen_of.assign(size, 0);
  a.positive.assign(size, true);
  a.inverse.assign(size, 0);
  a.pos_letter.assign(generators, 0);
  a.neg_letter.assign(generators, 0);
  std::vector<char> names;
  if (order.empty()) {
    for (int g = 0; g < generators; ++g) {
      names.push_back(generator_name(g, true));
      names.push_back(generator_name(g, false));
    }
  } else {
    for (char c : order) {
      if (!std::isspace(static_cast<unsigned char>(c))) names.push_back(c);
    }
    if (static_cast<int>(names.size()) != size) {
      throw AlphabetError("generator order '" + std::string(order) +
                          "' must list each of the " + std::to_string(size) +
                          " letters exactly once");
    }
  }
  std::vector<bool> seen(size, false);
  for (int id = 0; id < size; ++id) {
    const char c = names[id];
    const bool pos = std::islower(static_cast<unsigned char>(c)) != 0;
    const int g = pos ? c - 'a' : c - 'A';
    if (!std::isalpha(static_cast<unsigned char>(c)) || g < 0 ||
        g >= generators) {
      throw AlphabetError(std::string("unknown letter '") + c +
                          "' in generator order");
    }
    const int slot = 2 * g + (pos ? 0 : 1);
    if (seen[slot]) {
      throw AlphabetError(std::string("letter '") + c +
                          "' repeated in generator order");
    }
    seen[slot] = true;
    a.gen_of[id] = g;
    a.positive[id] = pos;
    (pos ? a.pos_letter : a.neg_letter)[g] = static_cast<Letter>(id);
  }
  for (int g = 0; g < generators; ++g) {
    a.inverse[a.pos_letter[g]] = a.neg_letter[g];
    a.inverse[a.neg_letter[g]] = a.pos_letter[g];
  }
  return a;
}

std::shared_ptr<ModelData> make_data(Node root, std::vector<GroupModel> factors,
                                     std::string_view order) {
  if (root.gen_count > GroupModel::kMaxGenerators) {
    throw UsageError("models are limited to " +
                     std::to_string(GroupModel::kMaxGenerators) +
                     " generators");
  }
  auto data = std::make_shared<ModelData>();
  data->alpha = make_alphabet(root.gen_count, order);
  data->root = std::move(root);
  assign_letters(data->root, data->alpha);
  data->factors = std::move(factors);
  data->descriptor = node_descriptor(data->root);
  return data;
}

// --- normalization -------------------------------------------------------

void normalize_node(const Node& n, Word& w, const Alphabet& a);

void normalize_free(Word& w, const Alphabet& a) {
  std::size_t top = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Letter l = w[i];
    if (top > 0 && w[top - 1] == a.inverse[l]) {
      --top;
    } else {
      w[top++] = l;
    }
  }
  w.resize(top);
}

void normalize_free_abelian(const Node& n, Word& w, const Alphabet& a) {
  std::vector<long> exps(n.gen_count, 0);
  for (Letter l : w) exps[a.gen_of[l] - n.first_gen] += a.positive[l] ? 1 : -1;
  w.clear();
  for (Letter l : n.letters_sorted) {
    const long e = exps[a.gen_of[l] - n.first_gen];
    const long reps = a.positive[l] ? e : -e;
    for (long k = 0; k < reps; ++k) w.push_back(l);
  }
}

void normalize_cyclic(const Node& n, Word& w, const Alphabet& a) {
  const long order = n.parameter;
  long e = 0;
  for (Letter l : w) e += a.positive[l] ? 1 : -1;
  w.clear();
  if (order <= 1) return;
  const long k = ((e % order) + order) % order;
  if (k == 0) return;
  const Letter pos = a.pos_letter[n.first_gen];
  const Letter neg = a.neg_letter[n.first_gen];
  Letter use = pos;
  long reps = k;
  if (order - k < k || (order - k == k && neg < pos)) {
    use = neg;
    reps = order - k;
  }
  w.assign(static_cast<std::size_t>(reps), use);
}

void normalize_free_product(const Node& n, Word& w, const Alphabet& a) {
  Word out;
  out.reserve(w.size());
  std::vector<std::pair<std::size_t, int>> syllables;  // start, child
  Word scratch;
  for (Letter l : w) {
    const int c = n.child_of_gen[a.gen_of[l] - n.first_gen];
    if (!syllables.empty() && syllables.back().second == c) {
      const std::size_t start = syllables.back().first;
      scratch.assign(out.begin() + static_cast<std::ptrdiff_t>(start),
                     out.end());
      scratch.push_back(l);
      normalize_node(n.children[c], scratch, a);
      out.resize(start);
      if (scratch.empty()) {
        syllables.pop_back();
      } else {
        out.insert(out.end(), scratch.begin(), scratch.end());
      }
    } else {
      scratch.assign(1, l);
      normalize_node(n.children[c], scratch, a);
      if (!scratch.empty()) {
        syllables.emplace_back(out.size(), c);
        out.insert(out.end(), scratch.begin(), scratch.end());
      }
    }
  }
  w = std::move(out);
}

void normalize_direct_product(const Node& n, Word& w, const Alphabet& a) {
  std::vector<Word> parts(n.children.size());
  for (Letter l : w) {
    parts[n.child_of_gen[a.gen_of[l] - n.first_gen]].push_back(l);
  }
  std::size_t total = 0;
  for (std::size_t c = 0; c < parts.size(); ++c) {
    normalize_node(n.children[c], parts[c], a);
    total += parts[c].size();
  }
  // Factors commute, so the ShortLex-least geodesic is the greedy merge of
  // the factors' ShortLex-least geodesics.
  w.clear();
  w.reserve(total);
  std::vector<std::size_t> pos(parts.size(), 0);
  while (w.size() < total) {
    std::size_t best = parts.size();
    for (std::size_t c = 0; c < parts.size(); ++c) {
      if (pos[c] < parts[c].size() &&
          (best == parts.size() || parts[c][pos[c]] < parts[best][pos[best]])) {
        best = c;
      }
    }
    w.push_back(parts[best][pos[best]++]);
  }
}

void normalize_node(const Node& n, Word& w, const Alphabet& a) {
  switch (n.family) {
    case Family::kFree:
      normalize_free(w, a);
      return;
    case Family::kFreeAbelian:
      normalize_free_abelian(n, w, a);
      return;
    case Family::kCyclic:
      normalize_cyclic(n, w, a);
      return;
    case Family::kFreeProduct:
      normalize_free_product(n, w, a);
      return;
    case Family::kDirectProduct:
      normalize_direct_product(n, w, a);
      return;
  }
}

// `w` is a normal form; appends `l` and renormalizes, touching only the tail
// where the family allows it.
void right_multiply_node(const Node& n, Word& w, Letter l, const Alphabet& a) {
  switch (n.family) {
    case Family::kFree:
      if (!w.empty() && w.back() == a.inverse[l]) {
        w.pop_back();
      } else {
        w.push_back(l);
      }
      return;
    case Family::kFreeProduct: {
      const int c = n.child_of_gen[a.gen_of[l] - n.first_gen];
      std::size_t start = w.size();
      while (start > 0 &&
             n.child_of_gen[a.gen_of[w[start - 1]] - n.first_gen] == c) {
        --start;
      }
      Word tail(w.begin() + static_cast<std::ptrdiff_t>(start), w.end());
      if (tail.empty()) {
        tail.push_back(l);
        normalize_node(n.children[c], tail, a);
      } else {
        right_multiply_node(n.children[c], tail, l, a);
      }
      w.resize(start);
      w.insert(w.end(), tail.begin(), tail.end());
      return;
    }
    default:
      w.push_back(l);
      normalize_node(n, w, a);
      return;
  }
}

// --- descriptor parsing -----------------------------------------------------

class DescriptorParser {
 public:
  explicit DescriptorParser(std::string_view text) : text_(text) {}

  GroupModel parse_all() {
    GroupModel m = parse_model();
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters");
    return m;
  }

 private:
  GroupModel parse_model() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalpha(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '-')) {
      ++pos_;
    }
    const std::string name(text_.substr(start, pos_ - start));
    expect('(');
    GroupModel result = GroupModel::free(0);
    if (name == "free-product" || name == "direct-product") {
      std::vector<GroupModel> factors;
      factors.push_back(parse_model());
      skip_space();
      while (peek() == ',') {
        ++pos_;
        factors.push_back(parse_model());
        skip_space();
      }
      result = name == "free-product"
                   ? GroupModel::free_product(std::move(factors))
                   : GroupModel::direct_product(std::move(factors));
    } else {
      const int value = parse_int();
      if (name == "free") {
        result = GroupModel::free(value);
      } else if (name == "free-abelian") {
        result = GroupModel::free_abelian(value);
      } else if (name == "cyclic") {
        result = GroupModel::cyclic(value);
      } else {
        fail("unknown family '" + name + "'");
      }
    }
    expect(')');
    return result;
  }

  int parse_int() {
    skip_space();
    int value = 0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr == first) fail("expected an integer");
    pos_ += static_cast<std::size_t>(ptr - first);
    return value;
  }

  void expect(char c) {
    skip_space();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw UsageError("group descriptor '" + std::string(text_) + "': " + what +
                     " at offset " + std::to_string(pos_));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

Node leaf(Family f, int parameter, int gens) {
  Node n;
  n.family = f;
  n.parameter = parameter;
  n.gen_count = gens;
  return n;
}

Node composite(Family f, const std::vector<GroupModel>& factors,
               const std::vector<const Node*>& roots) {
  if (factors.empty()) throw UsageError("products need at least one factor");
  Node n;
  n.family = f;
  int offset = 0;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    Node child = *roots[i];
    shift_generators(child, offset);
    for (int g = 0; g < child.gen_count; ++g) {
      n.child_of_gen.push_back(static_cast<int>(i));
    }
    offset += child.gen_count;
    n.children.push_back(std::move(child));
  }
  n.gen_count = offset;
  return n;
}

}  // namespace

// --- GroupModel --------------------------------------------------------------

GroupModel GroupModel::free(int rank) {
  if (rank < 0) throw UsageError("free group rank must be non-negative");
  return GroupModel(make_data(leaf(Family::kFree, rank, rank), {}, {}));
}

GroupModel GroupModel::free_abelian(int rank) {
  if (rank < 0) throw UsageError("free abelian rank must be non-negative");
  return GroupModel(
      make_data(leaf(Family::kFreeAbelian, rank, rank), {}, {}));
}

GroupModel GroupModel::cyclic(int order) {
  if (order < 1) throw UsageError("cyclic group order must be positive");
  return GroupModel(make_data(leaf(Family::kCyclic, order, 1), {}, {}));
}

GroupModel GroupModel::free_product(std::vector<GroupModel> factors) {
  std::vector<const Node*> roots;
  for (const auto& f : factors) roots.push_back(&f.data_->root);
  Node n = composite(Family::kFreeProduct, factors, roots);
  return GroupModel(make_data(std::move(n), std::move(factors), {}));
}

GroupModel GroupModel::direct_product(std::vector<GroupModel> factors) {
  std::vector<const Node*> roots;
  for (const auto& f : factors) roots.push_back(&f.data_->root);
  Node n = composite(Family::kDirectProduct, factors, roots);
  return GroupModel(make_data(std::move(n), std::move(factors), {}));
}

GroupModel GroupModel::parse(std::string_view descriptor,
                             std::string_view order) {
  GroupModel m = DescriptorParser(descriptor).parse_all();
  return order.empty() ? m : m.with_order(order);
}

GroupModel GroupModel::with_order(std::string_view order) const {
  return GroupModel(make_data(data_->root, data_->factors, order));
}

Family GroupModel::family() const { return data_->root.family; }

const std::vector<GroupModel>& GroupModel::factors() const {
  return data_->factors;
}

std::vector<std::pair<int, int>> GroupModel::factor_generator_ranges() const {
  std::vector<std::pair<int, int>> out;
  const Node& r = data_->root;
  if (r.children.empty()) {
    out.emplace_back(0, r.gen_count);
  } else {
    for (const auto& c : r.children) out.emplace_back(c.first_gen, c.gen_count);
  }
  return out;
}

int GroupModel::parameter() const { return data_->root.parameter; }

std::string GroupModel::descriptor() const { return data_->descriptor; }

std::string GroupModel::order_string() const {
  std::string out;
  for (int l = 0; l < alphabet_size(); ++l) {
    out += letter_name(static_cast<Letter>(l));
  }
  return out;
}

int GroupModel::generator_count() const { return data_->alpha.generators; }
int GroupModel::alphabet_size() const { return 2 * data_->alpha.generators; }

Letter GroupModel::inverse_letter(Letter l) const {
  return data_->alpha.inverse[l];
}
int GroupModel::generator_of(Letter l) const { return data_->alpha.gen_of[l]; }

int GroupModel::generator_order(int generator) const {
  if (generator < 0 || generator >= generator_count()) {
    throw UsageError("generator index out of range");
  }
  const detail::Node* n = &data_->root;
  while (!n->children.empty()) {
    n = &n->children[n->child_of_gen[generator - n->first_gen]];
  }
  return n->family == Family::kCyclic ? n->parameter : 0;
}
bool GroupModel::is_positive(Letter l) const {
  return data_->alpha.positive[l];
}

Letter GroupModel::letter_for(int generator, bool positive) const {
  if (generator < 0 || generator >= generator_count()) {
    throw AlphabetError("generator index " + std::to_string(generator) +
                        " out of range");
  }
  return positive ? data_->alpha.pos_letter[generator]
                  : data_->alpha.neg_letter[generator];
}

char GroupModel::letter_name(Letter l) const {
  return generator_name(data_->alpha.gen_of[l], data_->alpha.positive[l]);
}

Letter GroupModel::letter_from_name(char name) const {
  const auto c = static_cast<unsigned char>(name);
  if (std::isalpha(c)) {
    const bool pos = std::islower(c) != 0;
    const int g = pos ? name - 'a' : name - 'A';
    if (g >= 0 && g < generator_count()) return letter_for(g, pos);
  }
  throw AlphabetError(std::string("letter '") + name +
                      "' is not in the alphabet of " + descriptor());
}

Word GroupModel::parse_word(std::string_view text) const {
  Word w;
  const auto first = text.find_first_not_of(" \t");
  const auto last = text.find_last_not_of(" \t");
  if (first != std::string_view::npos &&
      text.substr(first, last - first + 1) == "1") {
    return w;
  }
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    w.push_back(letter_from_name(c));
  }
  return w;
}

std::string GroupModel::format_word(std::span<const Letter> word) const {
  if (word.empty()) return "1";
  std::string out;
  out.reserve(word.size());
  for (Letter l : word) out += letter_name(l);
  return out;
}

std::string GroupModel::format(const Element& e) const {
  return format_word(e.word());
}

Element GroupModel::parse_element(std::string_view text) const {
  return normalize(parse_word(text));
}

Element GroupModel::normalize(std::span<const Letter> word) const {
  const int size = alphabet_size();
  for (Letter l : word) {
    if (l >= size) {
      throw AlphabetError("letter id " + std::to_string(l) +
                          " is outside the alphabet of " + descriptor());
    }
  }
  Word w(word.begin(), word.end());
  normalize_node(data_->root, w, data_->alpha);
  return Element::from_normal_form(std::move(w));
}

void GroupModel::check_element(const Element& e) const {
  const int size = alphabet_size();
  for (Letter l : e.word()) {
    if (l >= size) {
      throw UsageError("element does not belong to model " + descriptor());
    }
  }
}

Element GroupModel::multiply(const Element& a, const Element& b) const {
  check_element(a);
  check_element(b);
  Word w = a.word();
  if (data_->root.family == Family::kFree ||
      data_->root.family == Family::kFreeProduct) {
    for (Letter l : b.word()) right_multiply_node(data_->root, w, l, data_->alpha);
  } else {
    w.insert(w.end(), b.word().begin(), b.word().end());
    normalize_node(data_->root, w, data_->alpha);
  }
  return Element::from_normal_form(std::move(w));
}

Element GroupModel::inverse(const Element& a) const {
  check_element(a);
  Word w(a.word().rbegin(), a.word().rend());
  for (auto& l : w) l = data_->alpha.inverse[l];
  normalize_node(data_->root, w, data_->alpha);
  return Element::from_normal_form(std::move(w));
}

Element GroupModel::right_multiply(const Element& a, Letter l) const {
  if (l >= alphabet_size()) {
    throw AlphabetError("letter id " + std::to_string(l) + " out of range");
  }
  Word w = a.word();
  right_multiply_node(data_->root, w, l, data_->alpha);
  return Element::from_normal_form(std::move(w));
}

Element GroupModel::generator_element(Letter l) const {
  const Letter one[1] = {l};
  return normalize(one);
}

std::size_t GroupModel::distance(const Element& a, const Element& b) const {
  return multiply(inverse(a), b).length();
}

std::vector<long> GroupModel::abelian_coordinates(const Element& e) const {
  if (family() != Family::kFreeAbelian) {
    throw UsageError("coordinates exist only for free-abelian models, not " +
                     descriptor());
  }
  std::vector<long> coords(generator_count(), 0);
  for (Letter l : e.word()) coords[generator_of(l)] += is_positive(l) ? 1 : -1;
  return coords;
}

Element GroupModel::from_abelian_coordinates(std::span<const long> coords) const {
  if (family() != Family::kFreeAbelian ||
      static_cast<int>(coords.size()) != generator_count()) {
    throw UsageError("coordinate vector does not match model " + descriptor());
  }
  Word w;
  for (int g = 0; g < generator_count(); ++g) {
    const long c = coords[g];
    const Letter l = letter_for(g, c >= 0);
    for (long k = 0; k < (c >= 0 ? c : -c); ++k) w.push_back(l);
  }
  return normalize(w);
}

bool GroupModel::same_as(const GroupModel& other) const {
  return data_ == other.data_ || (descriptor() == other.descriptor() &&
                                  order_string() == other.order_string());
}

}  // namespace rdwb
