#include "rdwb/decomposition.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <tuple>

#include "rdwb/error.hpp"
#include "rdwb/parallel.hpp"

namespace rdwb {

namespace {

// Members of the coset within kappa of both x and y, by rank.
void near_both(const StarGeometry& geo, Rank x, Rank y, int kappa,
               StarGeometry::CosetId id, std::vector<Rank>& bx, std::vector<Rank>& by,
               std::vector<Rank>& out) {
  geo.ball_around(x, kappa, bx);
  if (x != y) geo.ball_around(y, kappa, by);
  const auto& other = x != y ? by : bx;
  out.clear();
  std::set_intersection(bx.begin(), bx.end(), other.begin(), other.end(),
                        std::back_inserter(out));
  std::erase_if(out, [&](Rank r) { return !geo.in_coset(r, id); });
}

CentralDecomposition expand(const StarGeometry& geo, const RawDecomposition& raw,
                            const Element& g, const Element& h) {
  const auto& ball = geo.ball();
  const auto& model = geo.model();
  CentralDecomposition d;
  d.g1 = ball.element(raw.g1);
  const Element u = ball.element(raw.u);
  const Element v = ball.element(raw.v);
  const Element g1_inv = model.inverse(d.g1);
  d.eta = model.multiply(g1_inv, u);
  d.eta_prime = model.multiply(g1_inv, v);
  d.eta_second = model.multiply(model.inverse(v), u);
  d.g2 = model.multiply(model.inverse(u), g);
  d.g3 = model.multiply(model.inverse(v), h);
  d.peripheral = StarGeometry::id_peripheral(raw.coset);
  d.coset = geo.coset(raw.coset);
  d.witness.A1 = ball.element(raw.A1);
  d.witness.B2 = ball.element(raw.B2);
  d.witness.B1 = ball.element(raw.B1);
  d.witness.C2 = ball.element(raw.C2);
  d.witness.C1 = ball.element(raw.C1);
  d.witness.A2 = ball.element(raw.A2);
  d.witness.excursion = raw.excursion;
  return d;
}

}  // namespace

void raw_decompositions(const StarGeometry& geo, int kappa, Rank g, Rank h,
                        std::vector<RawDecomposition>& out) {
  const auto& ball = geo.ball();
  const auto& model = geo.model();
  const Element k = model.multiply(ball.element(ball.inverse(h)), ball.element(g));
  const auto q_h = geo.path(0, ball.word(h));
  const auto hq_k = geo.path(h, k.word());
  auto q_g = geo.path(0, ball.word(g));
  std::reverse(q_g.begin(), q_g.end());  // traversed from C = g back to A = 1

  std::vector<SideHit> ab, bc, ca;
  geo.hits(q_h, ab);
  geo.hits(hq_k, bc);
  geo.hits(q_g, ca);

  std::vector<Rank> bx, by, G1, U, V;
  for_each_common_coset(ab, bc, ca, [&](const TriangleMatch& m) {
    const auto id = m.ab->coset;
    RawDecomposition base;
    base.coset = id;
    base.A1 = m.ab->entry;
    base.B2 = m.ab->exit;
    base.B1 = m.bc->entry;
    base.C2 = m.bc->exit;
    base.C1 = m.ca->entry;
    base.A2 = m.ca->exit;
    base.excursion = m.ab->excursion || m.bc->excursion || m.ca->excursion;
    near_both(geo, base.A1, base.A2, kappa, id, bx, by, G1);
    near_both(geo, base.C1, base.C2, kappa, id, bx, by, U);
    near_both(geo, base.B1, base.B2, kappa, id, bx, by, V);
    for (Rank g1 : G1) {
      for (Rank v : V) {
        for (Rank u : U) {
          RawDecomposition d = base;
          d.g1 = g1;
          d.u = u;
          d.v = v;
          out.push_back(d);
        }
      }
    }
    return false;
  });
}

std::vector<CentralDecomposition> central_decompositions(const StarGeometry& geo,
                                                         const StarConstants& constants,
                                                         const Element& g, const Element& h) {
  if (geo.sigma() != constants.sigma) {
    throw UsageError("geometry was built for sigma=" + std::to_string(geo.sigma()));
  }
  std::vector<RawDecomposition> raw;
  raw_decompositions(geo, constants.kappa(), geo.rank(g), geo.rank(h), raw);
  std::vector<CentralDecomposition> out;
  out.reserve(raw.size());
  for (const auto& r : raw) out.push_back(expand(geo, r, g, h));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.coset, a.g1, a.eta_prime, a.eta) <
           std::tie(b.coset, b.g1, b.eta_prime, b.eta);
  });
  return out;
}

DecompositionIndex decomposition_index(const StarGeometry& geo, const StarConstants& constants,
                                       const Element& g, int p, int r1, int r2) {
  if (static_cast<int>(g.length()) != p) {
    throw UsageError("decomposition index: L(g) must equal p");
  }
  DecompositionIndex idx;
  idx.g = g;
  idx.p = p;
  idx.r1 = r1;
  idx.r2 = r2;
  if (r1 < 0 || r2 < 0 || p < std::abs(r1 - r2) || p > r1 + r2) return idx;

  const auto& ball = geo.ball();
  const auto& model = geo.model();
  if (ball.radius() < r1) throw ResourceError("ball smaller than r1");
  const Rank gr = geo.rank(g);
  std::map<DecompositionPart, std::map<CompletionTriple, std::pair<Element, Element>>> parts;
  std::vector<RawDecomposition> raw;
  for (std::size_t hr = ball.sphere_begin(r1); hr < ball.sphere_end(r1); ++hr) {
    const Element h = ball.element(static_cast<Rank>(hr));
    const Element k = model.multiply(model.inverse(h), g);
    if (static_cast<int>(k.length()) != r2) continue;
    ++idx.triangles;
    raw.clear();
    raw_decompositions(geo, constants.kappa(), gr, static_cast<Rank>(hr), raw);
    if (raw.empty()) idx.incomplete.push_back(h);
    for (const auto& r : raw) {
      const auto d = expand(geo, r, g, h);
      parts[DecompositionPart{d.g1, d.eta, d.g2, d.peripheral}].emplace(
          CompletionTriple{d.eta_prime, d.eta_second, d.g3}, std::make_pair(h, k));
    }
  }

  std::set<Element> L, R;
  std::set<std::pair<Element, Element>> LR;
  for (auto& [d, triples] : parts) {
    idx.D.push_back(d);
    L.insert(d.g1);
    R.insert(d.g2);
    LR.emplace(d.g1, d.g2);
    DecompositionView view;
    std::set<std::pair<Element, Element>> E;
    std::set<Element> E1, E2, U;
    for (const auto& [t, pair] : triples) {
      view.C.push_back(t);
      view.hk.push_back(pair);
      E.emplace(t.eta_prime, t.eta_second);
      E1.insert(t.eta_prime);
      E2.insert(t.eta_second);
      U.insert(t.g3);
    }
    view.E.assign(E.begin(), E.end());
    view.E_prime.assign(E1.begin(), E1.end());
    view.E_second.assign(E2.begin(), E2.end());
    view.U.assign(U.begin(), U.end());
    idx.views.push_back(std::move(view));
  }
  idx.L.assign(L.begin(), L.end());
  idx.R.assign(R.begin(), R.end());
  idx.LR.assign(LR.begin(), LR.end());
  return idx;
}

CountBoundFit count_bound_fit(const StarGeometry& geo, const StarConstants& constants,
                              int p_max, int r1_max, int workers) {
  if (p_max < 0 || r1_max < 0) throw UsageError("count_bound_fit: negative radius");
  if (geo.sigma() != constants.sigma) throw UsageError("geometry sigma mismatch");
  const auto& ball = geo.ball();
  const auto& model = geo.model();
  if (ball.radius() < decomposition_radius(p_max, r1_max, constants)) {
    throw ResourceError("ball of radius " + std::to_string(ball.radius()) +
                        " too small for count_bound_fit");
  }
  const std::size_t ng = ball.sphere_end(p_max);
  const std::size_t nh = ball.sphere_end(r1_max);
  const auto slots = static_cast<std::size_t>(r1_max + 1);

  // per g: best (count, r2) for each r1
  std::vector<std::vector<std::pair<std::size_t, int>>> best(ng);
  parallel_for(
      ng,
      [&](std::size_t gi) {
        const auto gr = static_cast<Rank>(gi);
        const Element g = ball.element(gr);
        std::map<std::pair<int, int>, std::vector<std::tuple<Rank, Rank, std::size_t>>> keys;
        std::vector<RawDecomposition> raw;
        for (std::size_t hi = 0; hi < nh; ++hi) {
          const auto hr = static_cast<Rank>(hi);
          const int r1 = ball.length(hr);
          const int r2 = static_cast<int>(
              model.multiply(ball.element(ball.inverse(hr)), g).length());
          raw.clear();
          raw_decompositions(geo, constants.kappa(), gr, hr, raw);
          auto& bucket = keys[{r1, r2}];
          for (const auto& d : raw) {
            bucket.emplace_back(d.g1, d.u, StarGeometry::id_peripheral(d.coset));
          }
        }
        auto& mine = best[gi];
        mine.assign(slots, {0, -1});
        for (auto& [key, bucket] : keys) {
          std::sort(bucket.begin(), bucket.end());
          const auto count = static_cast<std::size_t>(
              std::unique(bucket.begin(), bucket.end()) - bucket.begin());
          auto& slot = mine[static_cast<std::size_t>(key.first)];
          if (slot.second < 0 || count > slot.first) slot = {count, key.second};
        }
      },
      workers);

  CountBoundFit fit;
  fit.max_observed.resize(slots);
  std::vector<bool> seen(slots, false);
  for (std::size_t gi = 0; gi < ng; ++gi) {
    for (std::size_t r1 = 0; r1 < slots; ++r1) {
      const auto [count, r2] = best[gi][r1];
      if (r2 < 0) continue;
      auto& w = fit.max_observed[r1];
      if (!seen[r1] || count > w.count) {
        seen[r1] = true;
        w.count = count;
        w.g = ball.element(static_cast<Rank>(gi));
        w.p = ball.length(static_cast<Rank>(gi));
        w.r2 = r2;
      }
    }
  }
  std::vector<Point2> pts;
  for (std::size_t r1 = 0; r1 < slots; ++r1) {
    pts.push_back({static_cast<double>(r1), static_cast<double>(fit.max_observed[r1].count)});
  }
  const auto env = least_squares_envelope(pts);
  fit.C1 = env.slope;
  fit.C2 = env.intercept;
  return fit;
}

CountBoundFit count_bound_fit(const GroupModel& model, const PeripheralStructure& peripherals,
                              const StarConstants& constants, int p_max, int r1_max,
                              int workers, std::size_t budget) {
  auto geo = StarGeometry::build(model, peripherals, constants.sigma,
                                 decomposition_radius(p_max, r1_max, constants), budget);
  return count_bound_fit(*geo, constants, p_max, r1_max, workers);
}

MultiplicityFit multiplicity_fit(const StarGeometry& geo, const StarConstants& constants,
                                 int r1_max, int r2_max, int workers) {
  if (r1_max < 1 || r2_max < 1) throw UsageError("multiplicity_fit needs r1_max, r2_max >= 1");
  const auto& ball = geo.ball();
  const auto& model = geo.model();
  const int p_max = r1_max + r2_max;
  if (ball.radius() < decomposition_radius(p_max, r1_max, constants)) {
    throw ResourceError("ball too small for multiplicity_fit");
  }
  struct Tally {
    Rank h, k;
    int r1, r2;
    std::size_t n;
  };
  const std::size_t ng = ball.sphere_end(p_max);
  std::vector<std::vector<Tally>> per_g(ng);
  parallel_for(
      ng,
      [&](std::size_t gi) {
        const auto gr = static_cast<Rank>(gi);
        const Element g = ball.element(gr);
        std::vector<RawDecomposition> raw;
        for (std::size_t hi = ball.sphere_begin(1); hi < ball.sphere_end(r1_max); ++hi) {
          const auto hr = static_cast<Rank>(hi);
          const Element k = model.multiply(ball.element(ball.inverse(hr)), g);
          const int r2 = static_cast<int>(k.length());
          if (r2 < 1 || r2 > r2_max) continue;
          raw.clear();
          raw_decompositions(geo, constants.kappa(), gr, hr, raw);
          per_g[gi].push_back({hr, geo.rank(k), ball.length(hr), r2, raw.size()});
        }
      },
      workers);

  // counts keyed by (p, r1, r2, element)
  std::map<std::tuple<int, int, int, Rank>, std::size_t> xs, ys;
  for (std::size_t gi = 0; gi < ng; ++gi) {
    const int p = ball.length(static_cast<Rank>(gi));
    for (const auto& t : per_g[gi]) {
      xs[{p, t.r1, t.r2, t.h}] += t.n;
      ys[{p, t.r1, t.r2, t.k}] += t.n;
    }
  }
  MultiplicityFit fit;
  fit.max_x.assign(static_cast<std::size_t>(r1_max + 1), 0);
  fit.max_y.assign(static_cast<std::size_t>(r1_max + 1), 0);
  for (const auto& [key, n] : xs) {
    auto& m = fit.max_x[static_cast<std::size_t>(std::get<1>(key))];
    m = std::max(m, n);
  }
  for (const auto& [key, n] : ys) {
    auto& m = fit.max_y[static_cast<std::size_t>(std::get<1>(key))];
    m = std::max(m, n);
  }
  std::vector<Point2> pts;
  for (int r1 = 1; r1 <= r1_max; ++r1) {
    const auto r = static_cast<std::size_t>(r1);
    fit.K1 = std::max(fit.K1, static_cast<double>(fit.max_x[r]) / r1);
    pts.push_back({static_cast<double>(r1), static_cast<double>(fit.max_y[r])});
  }
  fit.y = least_squares_envelope(pts);
  return fit;
}

}  // namespace rdwb
