// One PASS/FAIL line per acceptance criterion. With an argument N only
// criterion N runs; the exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rdwb/ball.hpp"
#include "rdwb/best_constant.hpp"
#include "rdwb/decomposition.hpp"
#include "rdwb/error.hpp"
#include "rdwb/experiment.hpp"
#include "rdwb/finite_function.hpp"
#include "rdwb/opnorm.hpp"
#include "rdwb/proof_chain.hpp"
#include "rdwb/seed.hpp"
#include "rdwb/star.hpp"
#include "rdwb/tmap.hpp"

using namespace rdwb;
namespace fs = std::filesystem;

namespace {

const char* kZZ = "free-product(free-abelian(1), free-abelian(1))";

// Detail lines are indented; the verdict line is not.
#if defined(__GNUC__)
__attribute__((format(printf, 1, 2)))
#endif
void note(const char* fmt, ...) {
  std::printf("    ");
  va_list args;
  va_start(args, fmt);
  std::vprintf(fmt, args);
  va_end(args);
  std::printf("\n");
}

struct Check {
  bool ok = true;
  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      note("failed: %s", what.c_str());
    }
  }
};

ExperimentConfig load_config(const char* name) {
  return ExperimentConfig::load(fs::path(RDWB_CONFIG_DIR) / name);
}

// --- 1 -------------------------------------------------------------------

std::map<Element, int> bfs(const GroupModel& m, int radius) {
  std::map<Element, int> dist{{m.identity(), 0}};
  std::deque<Element> queue{m.identity()};
  while (!queue.empty()) {
    const Element x = queue.front();
    queue.pop_front();
    const int d = dist[x];
    if (d == radius) continue;
    for (int l = 0; l < m.alphabet_size(); ++l) {
      const Element y = m.right_multiply(x, static_cast<Letter>(l));
      if (dist.emplace(y, d + 1).second) queue.push_back(y);
    }
  }
  return dist;
}

bool criterion_1() {
  Check c;
  for (const char* d : {"free(2)", "free-abelian(2)", kZZ}) {
    const auto m = GroupModel::parse(d);
    const auto ball = BallIndex::enumerate(m, 5);
    const auto dist = bfs(m, 5);
    c.expect(dist.size() == ball.size(), std::string(d) + ": BFS ball size");
    std::size_t pairs = 0, bad = 0;
    c.expect(m.identity().length() == 0, std::string(d) + ": L(1) = 0");
    for (std::size_t i = 0; i < ball.size(); ++i) {
      const Element g = ball.element(static_cast<Rank>(i));
      const auto it = dist.find(g);
      if (it == dist.end() || it->second != static_cast<int>(g.length())) ++bad;
      if (m.inverse(g).length() != g.length()) ++bad;
      for (std::size_t j = 0; j < ball.size(); ++j) {
        const Element h = ball.element(static_cast<Rank>(j));
        if (m.multiply(g, h).length() > g.length() + h.length()) ++bad;
        ++pairs;
      }
    }
    note("%s: |B(5)| = %zu, %zu pairs, %zu violations", d, ball.size(), pairs, bad);
    c.expect(bad == 0, std::string(d) + ": axioms and BFS distances");
  }
  return c.ok;
}

// --- 2, 3 ----------------------------------------------------------------

bool criterion_2() {
  Check c;
  const auto m = GroupModel::parse(kZZ);
  const auto periph = PeripheralStructure::factors(m);
  const auto rep = verify_star(m, periph, {0, 1}, 5);
  note("verify_star (0,1) radius 5: %s, %llu triangles", rep.pass ? "pass" : "fail",
       static_cast<unsigned long long>(rep.triangles_checked));
  c.expect(rep.pass, "verify_star passes");
  const auto ball = BallIndex::enumerate(m, 5);
  c.expect(rep.triangles_checked == ball.size() * ball.size() * ball.size(),
           "every triangle with vertices in B(5) checked");
  const auto cal = calibrate_constants(m, periph, 5, 2, 3);
  note("calibrate_constants: %s", cal ? (std::to_string(cal->sigma) + "," + std::to_string(cal->delta)).c_str()
                                      : "none");
  c.expect(cal && *cal == (StarConstants{0, 1}), "calibrate returns (0,1)");
  return c.ok;
}

bool criterion_3() {
  Check c;
  const auto Z2 = GroupModel::free_abelian(2);
  const auto periph = PeripheralStructure::trivial(Z2);
  const StarConstants k{1, 1};
  const auto rep = verify_star(Z2, periph, k, 4);
  c.expect(!rep.pass && rep.counterexample.has_value(), "verify_star fails with a counterexample");
  if (rep.counterexample) {
    const auto& [A, B, C] = *rep.counterexample;
    note("counterexample (%s, %s, %s)", Z2.format(A).c_str(), Z2.format(B).c_str(),
         Z2.format(C).c_str());
    const auto geo = StarGeometry::build(Z2, periph, k.sigma, 12);
    c.expect(!find_central_coset(*geo, A, B, C, k), "no central coset on a larger ball");
    c.expect(verify_star(Z2, periph, k, 4).counterexample == rep.counterexample,
             "rerun gives the same triangle");
  }
  return c.ok;
}

// --- 4 -------------------------------------------------------------------

bool criterion_4() {
  Check c;
  const auto m = GroupModel::parse(kZZ);
  const auto periph = PeripheralStructure::factors(m);
  const StarConstants k{0, 1};
  const auto fit = count_bound_fit(m, periph, k, 5, 4);
  note("envelope %.6g r1 + %.6g", fit.C1, fit.C2);
  c.expect(fit.C1 >= 0.0, "nonnegative slope");
  const auto recount = oracle::max_counts(m, periph, k.sigma, k.kappa(), 5, 4);
  for (int r1 = 0; r1 <= 4; ++r1) {
    const auto seen = fit.max_observed[static_cast<std::size_t>(r1)].count;
    note("r1=%d max |D_g| = %zu (re-enumerated %zu), bound %.6g", r1, seen,
         recount[static_cast<std::size_t>(r1)], fit.bound(r1));
    c.expect(static_cast<double>(seen) <= fit.bound(r1), "envelope dominates r1=" + std::to_string(r1));
    c.expect(seen == recount[static_cast<std::size_t>(r1)], "re-enumeration agrees r1=" + std::to_string(r1));
  }
  return c.ok;
}

// --- 5 -------------------------------------------------------------------

bool criterion_5() {
  Check c;
  const auto F = GroupModel::free(2);
  const auto ball = BallIndex::enumerate(F, 3);
  RationalFunction s1(F);
  for (auto i = ball.sphere_begin(1); i < ball.sphere_end(1); ++i) s1.set(ball.element(static_cast<Rank>(i)), 1);
  const auto sq = convolve(s1, s1);
  bool exact = sq.size() == 13 && sq.at(F.identity()) == 4;
  for (auto i = ball.sphere_begin(2); i < ball.sphere_end(2); ++i) {
    exact = exact && sq.at(ball.element(static_cast<Rank>(i))) == 1;
  }
  c.expect(exact, "chi_S(1) * chi_S(1) = {1: 4, S(2): 1}");
  Rng rng(20240601, "acceptance/parseval");
  std::size_t ok = 0;
  for (int t = 0; t < 100; ++t) {
    RationalFunction x(F), y(F);
    for (std::size_t i = 0; i < ball.size(); ++i) {
      const Element e = ball.element(static_cast<Rank>(i));
      x.set(e, Rational(rng.uniform_int(-20, 20), rng.uniform_int(1, 9)));
      y.set(e, Rational(rng.uniform_int(0, 20), rng.uniform_int(1, 9)));
    }
    const auto xy = convolve(x, y);
    Rational spheres = 0;
    for (std::size_t p = 0; p <= 6; ++p) spheres += norm_squared(restrict_sphere(xy, p));
    if (spheres == norm_squared(xy)) ++ok;
  }
  note("%zu/100 seeded rational pairs satisfy the sphere decomposition exactly", ok);
  c.expect(ok == 100, "sphere decomposition of the norm");
  return c.ok;
}

// --- 6 -------------------------------------------------------------------

bool criterion_6() {
  Check c;
  const auto F = GroupModel::free(2);
  RealFunction s(F);
  for (int l = 0; l < F.alphabet_size(); ++l) s.set(F.generator_element(static_cast<Letter>(l)), 1.0);
  const auto ball = BallIndex::enumerate(F, 13);
  double prev = 0.0;
  bool monotone = true;
  for (int R = 2; R <= 12; ++R) {
    const double v = op_norm_lower(s, R, ball);
    note("free(2) R=%d: %.9f", R, v);
    monotone = monotone && v >= prev;
    prev = v;
  }
  c.expect(monotone, "nondecreasing in R");
  c.expect(prev >= 0.95 * 2.0 * std::sqrt(3.0), "R=12 reaches 0.95 * 2 sqrt 3");
  const auto Z = GroupModel::free_abelian(1);
  RealFunction t(Z);
  t.set(Z.parse_element("a"), 1.0);
  t.set(Z.parse_element("A"), 1.0);
  const double z = op_norm_lower(t, 50);
  note("free-abelian(1) R=50: %.9f", z);
  c.expect(z >= 1.99, "free-abelian(1) reaches 1.99");
  return c.ok;
}

// --- 7 -------------------------------------------------------------------

bool criterion_7() {
  Check c;
  auto bracket = [&](const GroupModel& m, int r1, int r2, int grid) {
    for (int p = std::abs(r1 - r2); p <= r1 + r2; ++p) {
      const auto e = best_constant(m, r1, r2, p);
      const double b = brute_constant(m, r1, r2, p, grid);
      const bool ok = std::abs(e.lower - b) <= 1e-4 && e.lower <= e.upper;
      if (!ok) note("r1=%d r2=%d p=%d lower %.9f brute %.9f upper %.9f", r1, r2, p, e.lower, b, e.upper);
      c.expect(ok, "bracket " + m.descriptor() + " " + std::to_string(r1) + "," + std::to_string(r2) +
                       "," + std::to_string(p));
    }
  };
  const auto Z = GroupModel::free_abelian(1);
  for (int r1 = 0; r1 <= 3; ++r1) {
    for (int r2 = 0; r2 <= 3; ++r2) bracket(Z, r1, r2, 40);
  }
  bracket(GroupModel::free(2), 1, 1, 12);
  note("brackets checked on free-abelian(1) r <= 3 and free(2) r1 = r2 = 1");

  BestConstantOptions o;
  o.seed = 11;
  const auto f = rd_profile(GroupModel::free(2), 3, o);
  for (std::size_t r = 0; r < f.C.size(); ++r) {
    note("free(2) C(%zu) = %.9f", r, f.C[r]);
    c.expect(f.C[r] <= 1.0 + 1e-6, "free(2) C(" + std::to_string(r) + ") <= 1 + 1e-6");
  }
  const auto z = rd_profile(GroupModel::free_abelian(2), 5, o);
  for (std::size_t r = 1; r < z.C.size(); ++r) {
    const double cap = std::sqrt(4.0 * static_cast<double>(r));
    note("free-abelian(2) C(%zu) = %.9f <= %.6f", r, z.C[r], cap);
    c.expect(z.C[r] <= cap, "free-abelian(2) C(" + std::to_string(r) + ") <= sqrt(4r)");
  }
  return c.ok;
}

// --- 8 -------------------------------------------------------------------

bool criterion_8() {
  Check c;
  const auto cfg = load_config("trace_zz.json");
  const auto rep = run_experiment(cfg);
  const auto& payload = rep.document["payload"];
  // P(r) = 1 + sum_i P_i(r + 2 kappa)^2 with P_i(r) = r + 1, kappa = 1
  auto P = [](double r) { return 1.0 + 2.0 * (r + 3.0) * (r + 3.0); };
  std::size_t chains = 0, steps = 0, failed = 0, bad_p = 0;
  std::set<int> samples;
  for (const auto& t : payload["traces"]) {
    ++chains;
    samples.insert(t["sample"].get<int>());
    const int r1 = t["r1"].get<int>();
    if (std::abs(t["P"].get<double>() - P(r1)) > 1e-9 * P(r1)) ++bad_p;
    for (const auto& s : t["steps"]) {
      ++steps;
      const double l = s["lhs"].get<double>(), r = s["rhs"].get<double>();
      if (!s["pass"].get<bool>() || l > r + 1e-9 * std::max(std::abs(l), std::abs(r))) ++failed;
    }
    if (t["structural_failure"].get<bool>()) ++failed;
  }
  note("%zu samples, %zu chains, %zu steps, %zu failing, fits C1=%s C2=%s K1=%s", samples.size(),
       chains, steps, failed, payload["fits"]["C1"].dump().c_str(),
       payload["fits"]["C2"].dump().c_str(), payload["fits"]["K1"].dump().c_str());
  c.expect(samples.size() == 50, "50 samples");
  c.expect(failed == 0 && rep.exit_code == kExitPass, "every step passes");
  c.expect(bad_p == 0, "P assembled from the peripheral bounds");
  return c.ok;
}

// --- 9 -------------------------------------------------------------------

bool criterion_9() {
  Check c;
  const auto F = GroupModel::free(2);
  const auto ball = BallIndex::enumerate(F, 2);
  Rng rng(99, "acceptance/complex");
  std::size_t ok = 0;
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    RealFunction x(F);
    ComplexFunction phi(F);
    for (std::size_t i = 0; i < ball.size(); ++i) {
      const Element e = ball.element(static_cast<Rank>(i));
      x.set(e, rng.uniform());
      phi.set(e, Complex(2 * rng.uniform() - 1, 2 * rng.uniform() - 1));
    }
    // Tightest P for which the nonnegative-part premise holds on this pair.
    double P = 0.0;
    for (const auto& part : nonnegative_parts(phi)) {
      if (part.empty()) continue;
      P = std::max(P, norm(convolve(x, part)) / (norm(x) * norm(part)));
    }
    const auto rep = complex_reduction_check(x, phi, P);
    worst = std::max(worst, rep.norm_x_phi / rep.bound);
    if (rep.pass) ++ok;
  }
  note("%zu/50 pass; largest ||x*phi|| / (2P||x||||phi||) = %.6f", ok, worst);
  c.expect(ok == 50, "factor-2 bound on every seeded pair");
  return c.ok;
}

// --- 10 ------------------------------------------------------------------

bool criterion_10() {
  Check c;
  const auto Z2 = GroupModel::free_abelian(2);
  const auto z = verify_tmap(make_z2_tmap(Z2), 6);
  c.expect(z.condition_i, "z2 condition (i)");
  c.expect(z.condition_ii && std::all_of(z.max_h_prime.begin(), z.max_h_prime.end(),
                                         [](std::size_t v) { return v == 0; }),
           "z2 condition (ii) with Q1 = 0");
  std::size_t above_2r2 = 0;
  for (const auto& row : z.counts) {
    if (row.count > static_cast<std::size_t>(2 * row.r + 2)) ++above_2r2;
  }
  std::string maxes;
  for (auto v : z.max_count) maxes += std::to_string(v) + " ";
  note("z2 max counts by r: %s", maxes.c_str());
  note("z2 cells above 2r (claimed Q2): %zu; above 2r+2: %zu; fitted envelope %.4g r + %.4g",
       z.excess, above_2r2, z.Q2_fit.slope, z.Q2_fit.intercept);
  c.expect(above_2r2 == 0, "z2 counts <= 2r + 2");

  const auto pg = verify_tmap(make_polygrowth_tmap(Z2), 4);
  std::string pm;
  for (auto v : pg.max_count) pm += std::to_string(v) + " ";
  note("polygrowth max counts by r: %s(all <= 2f(r)+2: %s)", pm.c_str(), pg.condition_iii ? "yes" : "no");
  c.expect(pg.condition_i && pg.condition_ii, "polygrowth conditions (i), (ii)");
  c.expect(pg.condition_iii, "polygrowth counts <= 2f(r) + 2");

  const auto m = GroupModel::parse(kZZ);
  const StarConstants k{0, 1};
  auto geo = StarGeometry::build(m, PeripheralStructure::factors(m), 0, 2 * 4 + k.kappa() + k.sigma);
  const auto st = verify_tmap(make_star_tmap(geo, k), 4);
  note("star-derived: (i) %s, Q1 fit %.4g r + %.4g, Q2 fit %.4g r + %.4g",
       st.condition_i ? "pass" : "fail", st.Q1_fit.slope, st.Q1_fit.intercept, st.Q2_fit.slope,
       st.Q2_fit.intercept);
  c.expect(st.pass, "star-derived (i)-(iii)");
  for (std::size_t r = 0; r < st.max_count.size(); ++r) {
    const double rr = static_cast<double>(r);
    c.expect(st.Q1_fit.dominates(rr, static_cast<double>(st.max_h_prime[r])) &&
                 st.Q2_fit.dominates(rr, static_cast<double>(st.max_count[r])),
             "linear envelopes dominate at r=" + std::to_string(r));
  }
  return c.ok;
}

// --- 11 ------------------------------------------------------------------

bool criterion_11() {
  Check c;
  const fs::path cache = fs::temp_directory_path() / "rdwb-acceptance-cache";
  fs::remove_all(cache);
  for (const char* name : {"ball_free2_r6.json", "star_zz.json", "star_z2_fail.json", "decomp_zz.json",
                           "opnorm_free2.json", "opnorm_z.json", "rd_profile_free2.json",
                           "rd_profile_z2.json", "trace_zz.json", "tmap_z2.json",
                           "tmap_polygrowth.json", "tmap_star_zz.json"}) {
    const auto cfg = load_config(name);
    RunOptions cold, warm;
    warm.cache_dir = cache;  // the second run may also go through the ball cache
    cold.workers = 1;
    const auto a = run_experiment(cfg, cold);
    const auto b = run_experiment(cfg, warm);
    const bool same = dump(a.document) == dump(b.document) &&
                      (a.csv ? b.csv && a.csv->str() == b.csv->str() : !b.csv);
    note("%-24s %s", name, same ? "identical" : "DIFFERENT");
    c.expect(same, name);
  }
  // Criteria without an experiment kind: their printed values are recomputed.
  for (auto fn : {criterion_5, criterion_9}) {
    std::fflush(stdout);
    c.expect(fn() == fn(), "in-process recomputation agrees");
  }
  fs::remove_all(cache);
  return c.ok;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<bool()>> criteria{
      criterion_1, criterion_2, criterion_3, criterion_4,  criterion_5, criterion_6,
      criterion_7, criterion_8, criterion_9, criterion_10, criterion_11};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty()) {
    for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) selected.push_back(i);
  }
  int failures = 0;
  for (int n : selected) {
    if (n < 1 || n > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "no criterion %d\n", n);
      return 64;
    }
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = criteria[static_cast<std::size_t>(n - 1)]();
    } catch (const std::exception& e) {
      note("exception: %s", e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d: %s (%.1f s)\n", n, ok ? "PASS" : "FAIL", secs);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
