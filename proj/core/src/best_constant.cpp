#include "rdwb/best_constant.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "rdwb/parallel.hpp"
#include "rdwb/seed.hpp"

namespace rdwb {

namespace {

struct Triple {
  std::uint32_t g, i, j;
};

// Sparse 0/1 tensor T[g][i][j] = [h_i k_j = g] over the three spheres.
struct SphereTensor {
  std::size_t ng = 0, n1 = 0, n2 = 0;
  std::vector<Triple> triples;

  double objective(const std::vector<double>& x, const std::vector<double>& y,
                   std::vector<double>& w) const {
    w.assign(ng, 0.0);
    for (const auto& t : triples) w[t.g] += x[t.i] * y[t.j];
    double s = 0;
    for (double z : w) s += z * z;
    return std::sqrt(s);
  }

  // x <- normalize(M_y^T M_y x); false when the image vanishes
  bool step_x(std::vector<double>& x, const std::vector<double>& y,
              std::vector<double>& w, std::vector<double>& u) const {
    objective(x, y, w);
    u.assign(n1, 0.0);
    for (const auto& t : triples) u[t.i] += y[t.j] * w[t.g];
    return normalize(u, x);
  }
  bool step_y(const std::vector<double>& x, std::vector<double>& y,
              std::vector<double>& w, std::vector<double>& u) const {
    objective(x, y, w);
    u.assign(n2, 0.0);
    for (const auto& t : triples) u[t.j] += x[t.i] * w[t.g];
    return normalize(u, y);
  }

  static bool normalize(const std::vector<double>& u, std::vector<double>& out) {
    double s = 0;
    for (double z : u) s += z * z;
    if (s == 0.0) return false;
    s = std::sqrt(s);
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = std::max(0.0, u[i] / s);
    return true;
  }

  double upper_bound() const {
    if (triples.empty()) return 0.0;
    std::vector<std::size_t> cg(ng, 0), ci(n1, 0), cj(n2, 0);
    for (const auto& t : triples) {
      ++cg[t.g];
      ++ci[t.i];
      ++cj[t.j];
    }
    // each unfolding has a diagonal Gram matrix, so its norm is the
    // square root of the largest slice count
    const double unf = static_cast<double>(std::min(
        {*std::max_element(cg.begin(), cg.end()), *std::max_element(ci.begin(), ci.end()),
         *std::max_element(cj.begin(), cj.end())}));
    const double young = static_cast<double>(std::min(n1, n2));
    return std::sqrt(std::min(unf, young));
  }
};

SphereTensor build_tensor(const BallIndex& ball, int r1, int r2, int p) {
  SphereTensor T;
  T.ng = ball.sphere_size(p);
  T.n1 = ball.sphere_size(r1);
  T.n2 = ball.sphere_size(r2);
  const std::size_t g0 = ball.sphere_begin(p);
  std::vector<Word> kwords;
  for (std::size_t j = ball.sphere_begin(r2); j < ball.sphere_end(r2); ++j) {
    kwords.push_back(ball.word(static_cast<Rank>(j)));
  }
  for (std::size_t i = 0; i < T.n1; ++i) {
    const auto h = static_cast<Rank>(ball.sphere_begin(r1) + i);
    for (std::size_t j = 0; j < T.n2; ++j) {
      const Rank g = ball.walk(h, kwords[j]);
      if (g == kNoRank) throw ResourceError("best_constant: ball too small");
      if (ball.length(g) != p) continue;
      T.triples.push_back({static_cast<std::uint32_t>(g - g0), static_cast<std::uint32_t>(i),
                           static_cast<std::uint32_t>(j)});
    }
  }
  return T;
}

struct RestartResult {
  double value = 0.0;
  std::vector<double> x, y;
};

RestartResult alternate(const SphereTensor& T, std::vector<double> x, std::vector<double> y,
                        const BestConstantOptions& options) {
  std::vector<double> w, u;
  SphereTensor::normalize(std::vector<double>(x), x);
  SphereTensor::normalize(std::vector<double>(y), y);
  double value = T.objective(x, y, w);
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    if (!T.step_x(x, y, w, u) || !T.step_y(x, y, w, u)) break;
    const double next = T.objective(x, y, w);
    const bool done = next - value <= options.tol * next;
    value = std::max(value, next);
    if (done) break;
  }
  return {value, std::move(x), std::move(y)};
}

}  // namespace

BestConstantEstimate best_constant(const BallIndex& ball, int r1, int r2, int p,
                                   const BestConstantOptions& options) {
  BestConstantEstimate est(ball.model());
  est.r1 = r1;
  est.r2 = r2;
  est.p = p;
  est.tolerance = options.tol;
  if (r1 < 0 || r2 < 0 || p < 0) throw UsageError("best_constant: negative radius");
  if (p < std::abs(r1 - r2) || p > r1 + r2) return est;
  if (ball.radius() < r1 + r2) throw ResourceError("best_constant needs a ball of radius r1+r2");

  const SphereTensor T = build_tensor(ball, r1, r2, p);
  est.upper = T.upper_bound();
  if (T.triples.empty()) return est;

  const std::size_t restarts = std::max<std::size_t>(1, options.restarts);
  std::vector<RestartResult> results(restarts);
  const std::string label =
      "best_constant/" + std::to_string(r1) + "/" + std::to_string(r2) + "/" + std::to_string(p);
  parallel_for(
      restarts,
      [&](std::size_t k) {
        std::vector<double> x(T.n1, 1.0), y(T.n2, 1.0);
        if (k > 0) {
          Rng rng(options.seed, label + "/" + std::to_string(k));
          for (auto& v : x) v = rng.uniform() + 1e-3;
          for (auto& v : y) v = rng.uniform() + 1e-3;
        }
        results[k] = alternate(T, std::move(x), std::move(y), options);
      },
      options.workers);

  std::size_t best = 0;
  for (std::size_t k = 1; k < restarts; ++k) {
    if (results[k].value > results[best].value) best = k;
  }
  // The value is a floating evaluation at an attained pair; anything above
  // the certificate is rounding.
  est.lower = std::min(results[best].value, est.upper);
  est.restarts = restarts;
  for (std::size_t i = 0; i < T.n1; ++i) {
    est.x.set(ball.element(static_cast<Rank>(ball.sphere_begin(r1) + i)), results[best].x[i]);
  }
  for (std::size_t j = 0; j < T.n2; ++j) {
    est.y.set(ball.element(static_cast<Rank>(ball.sphere_begin(r2) + j)), results[best].y[j]);
  }
  return est;
}

BestConstantEstimate best_constant(const GroupModel& model, int r1, int r2, int p,
                                   const BestConstantOptions& options) {
  const auto ball = BallIndex::enumerate(model, std::max(0, r1 + r2));
  return best_constant(ball, r1, r2, p, options);
}

double brute_constant(const GroupModel& model, int r1, int r2, int p, int grid_resolution) {
  if (grid_resolution < 1) throw UsageError("brute_constant: grid resolution must be positive");
  const auto ball = BallIndex::enumerate(model, std::max(r1, r2));
  const std::size_t n1 = ball.sphere_size(r1), n2 = ball.sphere_size(r2);
  if (n1 * n2 > 36) throw UsageError("brute_constant: dimension too large");

  // Product table from group multiplication, independent of the ball's table.
  std::vector<Element> hs, ks;
  for (std::size_t i = ball.sphere_begin(r1); i < ball.sphere_end(r1); ++i) {
    hs.push_back(ball.element(static_cast<Rank>(i)));
  }
  for (std::size_t j = ball.sphere_begin(r2); j < ball.sphere_end(r2); ++j) {
    ks.push_back(ball.element(static_cast<Rank>(j)));
  }
  std::map<Element, std::size_t> target;
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> terms;
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      const Element g = model.multiply(hs[i], ks[j]);
      if (static_cast<int>(g.length()) != p) continue;
      const auto [it, fresh] = target.try_emplace(g, target.size());
      terms.emplace_back(it->second, i, j);
    }
  }
  if (terms.empty()) return 0.0;
  std::vector<double> acc(target.size());
  // a, b are unnormalised nonnegative amplitude vectors
  auto value = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double na = 0, nb = 0;
    for (double v : a) na += v * v;
    for (double v : b) nb += v * v;
    if (na == 0 || nb == 0) return 0.0;
    std::fill(acc.begin(), acc.end(), 0.0);
    for (const auto& [g, i, j] : terms) acc[g] += a[i] * b[j];
    double s = 0;
    for (double v : acc) s += v * v;
    return std::sqrt(s / (na * nb));
  };

  // simplex grid points, mapped to the sphere by square roots
  auto grid = [&](std::size_t n) {
    std::vector<std::vector<double>> pts;
    std::vector<int> c(n, 0);
    auto rec = [&](auto&& self, std::size_t pos, int left) -> void {
      if (pos + 1 == n) {
        c[pos] = left;
        std::vector<double> v(n);
        for (std::size_t t = 0; t < n; ++t) v[t] = std::sqrt(static_cast<double>(c[t]));
        pts.push_back(std::move(v));
        return;
      }
      for (int k = 0; k <= left; ++k) {
        c[pos] = k;
        self(self, pos + 1, left - k);
      }
    };
    rec(rec, 0, grid_resolution);
    return pts;
  };
  const auto gx = grid(n1), gy = grid(n2);
  std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>> scored;
  for (std::size_t a = 0; a < gx.size(); ++a) {
    for (std::size_t b = 0; b < gy.size(); ++b) scored.push_back({value(gx[a], gy[b]), {a, b}});
  }
  std::sort(scored.begin(), scored.end(),
            [](const auto& l, const auto& r) { return l.first > r.first; });

  double best = scored.front().first;
  const std::size_t seeds = std::min<std::size_t>(8, scored.size());
  for (std::size_t s = 0; s < seeds; ++s) {
    std::vector<double> a = gx[scored[s].second.first], b = gy[scored[s].second.second];
    double cur = scored[s].first;
    for (double step = 1.0 / grid_resolution; step > 1e-10;) {
      bool improved = false;
      for (std::size_t t = 0; t < n1 + n2; ++t) {
        for (double dir : {step, -step}) {
          auto& v = t < n1 ? a[t] : b[t - n1];
          const double old = v;
          v = std::max(0.0, old + dir);
          const double cand = value(a, b);
          if (cand > cur + 1e-15) {
            cur = cand;
            improved = true;
          } else {
            v = old;
          }
        }
      }
      if (!improved) step /= 2;
    }
    best = std::max(best, cur);
  }
  return best;
}

RdProfile rd_profile(const GroupModel& model, int r_max, const BestConstantOptions& options,
                     std::size_t budget) {
  if (r_max < 0) throw UsageError("rd_profile: negative radius");
  const auto ball = BallIndex::enumerate(model, 2 * r_max, budget);
  RdProfile profile;
  for (int r1 = 0; r1 <= r_max; ++r1) {
    for (int r2 = 0; r2 <= r_max; ++r2) {
      for (int p = std::abs(r1 - r2); p <= r1 + r2; ++p) {
        profile.cells.push_back({r1, r2, p, 0.0, 0.0, 0});
      }
    }
  }
  BestConstantOptions inner = options;
  inner.workers = 1;
  parallel_for(
      profile.cells.size(),
      [&](std::size_t c) {
        auto& cell = profile.cells[c];
        const auto est = best_constant(ball, cell.r1, cell.r2, cell.p, inner);
        cell.lower = est.lower;
        cell.upper = est.upper;
        cell.restarts = est.restarts;
      },
      options.workers);
  profile.C.assign(static_cast<std::size_t>(r_max + 1), 0.0);
  profile.C_upper.assign(static_cast<std::size_t>(r_max + 1), 0.0);
  for (int r = 0; r <= r_max; ++r) {
    for (const auto& cell : profile.cells) {
      if (cell.r1 > r || cell.r2 > r) continue;
      auto idx = static_cast<std::size_t>(r);
      profile.C[idx] = std::max(profile.C[idx], cell.lower);
      profile.C_upper[idx] = std::max(profile.C_upper[idx], cell.upper);
    }
  }
  return profile;
}

}  // namespace rdwb
