#include "rdwb/polynomial.hpp"

#include <algorithm>
#include <cstdio>

namespace rdwb {

double PolynomialBound::operator()(double r) const {
  double v = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) v = v * r + *it;
  return v;
}

int PolynomialBound::degree() const {
  for (int d = static_cast<int>(coefficients.size()) - 1; d >= 0; --d) {
    if (coefficients[static_cast<std::size_t>(d)] != 0.0) return d;
  }
  return 0;
}

PolynomialBound PolynomialBound::shifted(double shift) const {
  // Horner in polynomial arithmetic: p(r+s) = (...(c_n (r+s) + c_{n-1})(r+s) ...)
  PolynomialBound out{{0.0}, role};
  const PolynomialBound lin{{shift, 1.0}, role};
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
    out = out * lin;
    out.coefficients[0] += *it;
  }
  return out;
}

PolynomialBound PolynomialBound::operator+(const PolynomialBound& other) const {
  PolynomialBound out{coefficients, role};
  out.coefficients.resize(std::max(coefficients.size(), other.coefficients.size()), 0.0);
  for (std::size_t i = 0; i < other.coefficients.size(); ++i) {
    out.coefficients[i] += other.coefficients[i];
  }
  return out;
}

PolynomialBound PolynomialBound::operator*(const PolynomialBound& other) const {
  if (coefficients.empty() || other.coefficients.empty()) return {{0.0}, role};
  PolynomialBound out{std::vector<double>(coefficients.size() + other.coefficients.size() - 1, 0.0),
                      role};
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    for (std::size_t j = 0; j < other.coefficients.size(); ++j) {
      out.coefficients[i + j] += coefficients[i] * other.coefficients[j];
    }
  }
  return out;
}

std::string PolynomialBound::format() const {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    if (i && coefficients[i] == 0.0) continue;
    std::snprintf(buf, sizeof buf, "%.12g", coefficients[i]);
    if (!out.empty()) out += " + ";
    out += buf;
    if (i == 1) out += " r";
    if (i > 1) out += " r^" + std::to_string(i);
  }
  return out;
}

const char* role_name(PolynomialRole role) {
  switch (role) {
    case PolynomialRole::peripheral: return "peripheral";
    case PolynomialRole::assembled: return "assembled";
    case PolynomialRole::final_bound: return "final";
    case PolynomialRole::internal: return "internal";
  }
  return "unknown";
}

PolynomialBound assemble_P(const std::vector<PolynomialBound>& peripheral_bounds, int kappa) {
  PolynomialBound P{{1.0}, PolynomialRole::assembled};
  for (const auto& Pi : peripheral_bounds) {
    const auto s = Pi.shifted(2.0 * kappa);
    P = P + s * s;
  }
  P.role = PolynomialRole::assembled;
  return P;
}

}  // namespace rdwb
