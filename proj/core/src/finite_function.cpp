#include "rdwb/finite_function.hpp"

namespace rdwb {

ComplexFunction convolve(const RealFunction& x, const ComplexFunction& phi) {
  if (!x.model().same_as(phi.model())) throw UsageError("convolve: model mismatch");
  const auto& model = x.model();
  ComplexFunction out(model);
  for (const auto& [h, xv] : x) {
    for (const auto& [k, v] : phi) out.add(model.multiply(h, k), xv * v);
  }
  return out;
}

RealFunction to_real(const RationalFunction& f) {
  RealFunction out(f.model());
  for (const auto& [e, v] : f) out.set(e, to_double(v));
  return out;
}

std::array<RealFunction, 4> nonnegative_parts(const ComplexFunction& phi) {
  const auto& m = phi.model();
  std::array<RealFunction, 4> parts{RealFunction(m), RealFunction(m), RealFunction(m),
                                    RealFunction(m)};
  for (const auto& [e, v] : phi) {
    if (v.real() > 0) parts[0].set(e, v.real());
    if (v.real() < 0) parts[1].set(e, -v.real());
    if (v.imag() > 0) parts[2].set(e, v.imag());
    if (v.imag() < 0) parts[3].set(e, -v.imag());
  }
  return parts;
}

}  // namespace rdwb
