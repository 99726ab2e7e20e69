#pragma once

#include <string>
#include <vector>

namespace rdwb {

enum class PolynomialRole { peripheral, assembled, final_bound, internal };

// Coefficients in ascending degree.
struct PolynomialBound {
  std::vector<double> coefficients;
  PolynomialRole role = PolynomialRole::peripheral;

  static PolynomialBound constant(double c, PolynomialRole role = PolynomialRole::peripheral) {
    return {{c}, role};
  }
  double operator()(double r) const;
  int degree() const;
  // p(r + shift), expanded.
  PolynomialBound shifted(double shift) const;
  PolynomialBound operator+(const PolynomialBound& other) const;
  PolynomialBound operator*(const PolynomialBound& other) const;
  std::string format() const;
};

const char* role_name(PolynomialRole role);

// P(r) = 1 + sum_i P_i(r + 2 kappa)^2.
PolynomialBound assemble_P(const std::vector<PolynomialBound>& peripheral_bounds, int kappa);

}  // namespace rdwb
