#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rdwb/error.hpp"
#include "rdwb/group.hpp"

namespace rdwb {

using Rational = boost::multiprecision::cpp_rational;
using Complex = std::complex<double>;

/// Finitely supported function on a group, keyed in ShortLex order.
/// Only nonzero values are stored.
template <typename T>
class FiniteFunction {
 public:
  using Map = std::map<Element, T>;

  explicit FiniteFunction(GroupModel model) : model_(std::move(model)) {}

  const GroupModel& model() const noexcept { return model_; }

  T at(const Element& e) const {
    const auto it = values_.find(e);
    return it == values_.end() ? T(0) : it->second;
  }
  void set(const Element& e, const T& v) {
    if (v == T(0)) values_.erase(e);
    else values_[e] = v;
  }
  void add(const Element& e, const T& v) {
    if (v == T(0)) return;
    auto [it, inserted] = values_.try_emplace(e, v);
    if (!inserted) {
      it->second += v;
      if (it->second == T(0)) values_.erase(it);
    }
  }

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  typename Map::const_iterator begin() const { return values_.begin(); }
  typename Map::const_iterator end() const { return values_.end(); }
  std::vector<Element> support() const {
    std::vector<Element> out;
    out.reserve(values_.size());
    for (const auto& [e, v] : values_) out.push_back(e);
    return out;
  }

  friend bool operator==(const FiniteFunction& a, const FiniteFunction& b) {
    return a.model_.same_as(b.model_) && a.values_ == b.values_;
  }

 private:
  GroupModel model_;
  Map values_;
};

using RationalFunction = FiniteFunction<Rational>;
using RealFunction = FiniteFunction<double>;
using ComplexFunction = FiniteFunction<Complex>;

inline double to_double(double v) { return v; }
inline double to_double(const Rational& v) { return v.convert_to<double>(); }
inline double to_double(const Complex& v) { return std::abs(v); }

// |v|^2 in the value domain (exact for rationals).
inline double abs2(double v) { return v * v; }
inline Rational abs2(const Rational& v) { return v * v; }
inline double abs2(const Complex& v) { return std::norm(v); }

// (x*y)(g) = sum over hk = g of x(h) y(k).
template <typename T>
FiniteFunction<T> convolve(const FiniteFunction<T>& x, const FiniteFunction<T>& y) {
  if (!x.model().same_as(y.model())) throw UsageError("convolve: model mismatch");
  const auto& model = x.model();
  FiniteFunction<T> out(model);
  for (const auto& [h, xv] : x) {
    for (const auto& [k, yv] : y) out.add(model.multiply(h, k), xv * yv);
  }
  return out;
}

// Mixed convolution: nonnegative real x against complex phi.
ComplexFunction convolve(const RealFunction& x, const ComplexFunction& phi);

// f_p: f restricted to the sphere of radius p.
template <typename T>
FiniteFunction<T> restrict_sphere(const FiniteFunction<T>& f, std::size_t p) {
  FiniteFunction<T> out(f.model());
  for (const auto& [e, v] : f) {
    if (e.length() == p) out.set(e, v);
  }
  return out;
}

template <typename T>
auto norm_squared(const FiniteFunction<T>& f) {
  decltype(abs2(T{})) s = 0;
  for (const auto& [e, v] : f) s += abs2(v);
  return s;
}

template <typename T>
double norm(const FiniteFunction<T>& f) {
  return std::sqrt(to_double(norm_squared(f)));
}

template <typename T>
double l1_norm(const FiniteFunction<T>& f) {
  double s = 0;
  for (const auto& [e, v] : f) s += std::abs(to_double(v));
  return s;
}

RealFunction to_real(const RationalFunction& f);

// phi = phi1 - phi2 + i (phi3 - phi4) with nonnegative parts.
std::array<RealFunction, 4> nonnegative_parts(const ComplexFunction& phi);

}  // namespace rdwb
