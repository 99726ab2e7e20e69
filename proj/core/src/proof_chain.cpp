#include "rdwb/proof_chain.hpp"

#include <cmath>
#include <string>

namespace rdwb {

std::optional<PolynomialBound> default_peripheral_bound(const PeripheralStructure& peripherals,
                                                        std::size_t i) {
  const auto& gens = peripherals[i].generators;
  if (gens.empty()) return PolynomialBound::constant(1.0);
  if (gens.size() == 1) {
    const int order = peripherals.model().generator_order(gens.front());
    if (order == 0) return PolynomialBound{{1.0, 1.0}, PolynomialRole::peripheral};
    return PolynomialBound::constant(std::sqrt(static_cast<double>(order)));
  }
  return std::nullopt;
}

ChainFits fit_chain_constants(const StarGeometry& geo, const StarConstants& constants,
                              int r1_max, int r2_max, int workers) {
  const auto count = count_bound_fit(geo, constants, r1_max + r2_max, r1_max, workers);
  const auto mult = multiplicity_fit(geo, constants, r1_max, r2_max, workers);
  ChainFits fits;
  fits.C1 = count.C1;
  fits.C2 = count.C2;
  fits.K1 = mult.K1;
  fits.y_mult = mult.y;
  return fits;
}

const DecompositionIndex& DecompositionCache::get(const StarGeometry& geo,
                                                  const StarConstants& constants,
                                                  const Element& g, int p, int r1, int r2) {
  const auto key = std::make_tuple(g, p, r1, r2);
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    it = cache_.emplace(key, decomposition_index(geo, constants, g, p, r1, r2)).first;
  }
  return it->second;
}

namespace {

void check_support(const RealFunction& f, int r, const char* name) {
  for (const auto& [e, v] : f) {
    if (static_cast<int>(e.length()) != r) {
      throw UsageError(std::string(name) + " must be supported on the sphere of radius " +
                       std::to_string(r));
    }
    if (v < 0) throw UsageError(std::string(name) + " must be nonnegative");
  }
}

bool leq(double lhs, double rhs) {
  return lhs <= rhs + kChainTolerance * std::max(std::abs(lhs), std::abs(rhs));
}

}  // namespace

ChainReport trace_proof_chain(const StarGeometry& geo, const StarConstants& constants,
                              const RealFunction& x, int r1, const RealFunction& y, int r2,
                              int p, const ChainFits& fits,
                              const std::vector<PolynomialBound>& peripheral_bounds,
                              DecompositionCache* cache) {
  if (peripheral_bounds.size() != geo.peripherals().size()) {
    throw UsageError("trace_proof_chain: one P_i per peripheral subgroup required");
  }
  check_support(x, r1, "x");
  check_support(y, r2, "y");
  const auto& model = geo.model();
  DecompositionCache local;
  DecompositionCache& decomp = cache ? *cache : local;

  ChainReport rep;
  rep.r1 = r1;
  rep.r2 = r2;
  rep.p = p;
  const int kappa = constants.kappa();
  const PolynomialBound P = assemble_P(peripheral_bounds, kappa);
  rep.P_value = P(r1);
  rep.Q_value = fits.Q(r1);
  const double count_bound = fits.C1 * r1 + fits.C2;

  const auto xy = restrict_sphere(convolve(x, y), static_cast<std::size_t>(p));
  rep.norm_sq = norm_squared(xy);

  double v1 = 0, v2 = 0, v3 = 0, S = 0, s_conv = 0, s_rd = 0, W = 0;
  std::map<std::pair<Element, Element>, std::pair<double, double>> by_pair;  // (A, B) per g-bar

  for (const auto& [g, value] : xy) {
    const auto& idx = decomp.get(geo, constants, g, p, r1, r2);
    for (const auto& h : idx.incomplete) {
      const Element k = model.multiply(model.inverse(h), g);
      if (x.at(h) * y.at(k) > 0) {
        rep.structural_failure = true;
        rep.missing.emplace_back(h, k);
      }
    }
    double expanded = 0;
    for (std::size_t m = 0; m < idx.D.size(); ++m) {
      const auto& d = idx.D[m];
      const auto& view = idx.views[m];
      double sum_d = 0;
      // per eta' (which fixes eta'' = eta'^-1 eta): sums of x^2 and y^2
      std::map<Element, std::pair<double, double>> per_e;
      std::map<Element, Element> second_of;
      for (std::size_t t = 0; t < view.C.size(); ++t) {
        const double xv = x.at(view.hk[t].first);
        const double yv = y.at(view.hk[t].second);
        sum_d += xv * yv;
        auto& acc = per_e[view.C[t].eta_prime];
        acc.first += xv * xv;
        acc.second += yv * yv;
        second_of.emplace(view.C[t].eta_prime, view.C[t].eta_second);
      }
      expanded += sum_d;
      v2 += sum_d * sum_d;

      ChainTerm term(model);
      term.g = g;
      term.g1 = d.g1;
      term.eta = d.eta;
      term.g2 = d.g2;
      term.peripheral = d.peripheral;
      double cs = 0;
      for (const auto& [eta_prime, acc] : per_e) {
        const double X = std::sqrt(acc.first), Y = std::sqrt(acc.second);
        cs += X * Y;
        term.X.set(eta_prime, X);
        term.Y.set(second_of.at(eta_prime), Y);
      }
      v3 += cs * cs;
      // the E_d-restricted sum written through X and Y
      double inner = 0;
      for (const auto& [ep, es] : view.E) inner += term.X.at(ep) * term.Y.at(es);
      S += inner * inner;

      const double nx = norm_squared(term.X), ny = norm_squared(term.Y);
      s_conv += norm_squared(convolve(term.X, term.Y));
      const double Pi = peripheral_bounds[d.peripheral](r1 + 2.0 * kappa);
      s_rd += Pi * Pi * nx * ny;
      W += nx * ny;
      auto& ab = by_pair[{d.g1, d.g2}];
      ab.first += nx;
      ab.second += ny;
      if (nx > 0 || ny > 0) rep.terms.push_back(std::move(term));
    }
    v1 += expanded * expanded;
  }

  double V = 0, Fx = 0, Fy = 0;
  for (const auto& [gbar, ab] : by_pair) {
    V += ab.first * ab.second;
    Fx += ab.first;
    Fy += ab.second;
  }
  const double nx2 = norm_squared(x), ny2 = norm_squared(y);
  const double Px = rep.P_value;
  rep.final_bound = rep.Q_value * Px * nx2 * ny2;

  auto add = [&](std::string name, double lhs, double rhs) {
    rep.steps.push_back({std::move(name), lhs, rhs, leq(lhs, rhs)});
  };
  add("last", rep.norm_sq, v1);
  add("ineg1", v1, count_bound * v2);
  add("xy", count_bound * v2, count_bound * v3);
  add("2sums", count_bound * v3, count_bound * S);
  add("S_convolution", S, s_conv);
  add("S_peripheral_rd", s_conv, s_rd);
  add("S_assembled_P", s_rd, Px * W);
  add("S_regroup", W, V);
  add("S_split", V, Fx * Fy);
  add("multiplicity_x", Fx, fits.K1 * r1 * nx2);
  add("multiplicity_y", Fy, fits.y_mult(r1) * ny2);
  add("final", rep.norm_sq, rep.final_bound);

  rep.pass = !rep.structural_failure;
  for (const auto& s : rep.steps) rep.pass = rep.pass && s.pass;
  return rep;
}

ComplexReductionReport complex_reduction_check(const RealFunction& x, const ComplexFunction& phi,
                                               double P_value) {
  ComplexReductionReport rep;
  for (const auto& [e, v] : x) {
    if (v < 0) throw UsageError("complex_reduction_check: x must be nonnegative");
  }
  rep.norm_x = norm(x);
  rep.norm_phi = norm(phi);
  rep.norm_x_phi = norm(convolve(x, phi));
  const auto parts = nonnegative_parts(phi);
  double parts_sq = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    rep.part_norms[i] = norm(parts[i]);
    parts_sq += rep.part_norms[i] * rep.part_norms[i];
    rep.part_images[i] = norm(convolve(x, parts[i]));
    rep.sum_parts += rep.part_images[i];
    rep.premise = rep.premise && leq(rep.part_images[i], P_value * rep.norm_x * rep.part_norms[i]);
  }
  rep.parts_orthogonal = std::abs(parts_sq - rep.norm_phi * rep.norm_phi) <=
                         kChainTolerance * std::max(1.0, parts_sq);
  rep.bound = 2.0 * P_value * rep.norm_x * rep.norm_phi;
  rep.triangle_ok = leq(rep.norm_x_phi, rep.sum_parts);
  rep.bound_ok = leq(rep.norm_x_phi, rep.bound);
  rep.pass = rep.parts_orthogonal && rep.premise && rep.triangle_ok && rep.bound_ok;
  return rep;
}

}  // namespace rdwb
