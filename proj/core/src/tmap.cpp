#include "rdwb/tmap.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <mutex>
#include <set>
#include <tuple>

#include "rdwb/ball.hpp"
#include "rdwb/decomposition.hpp"
#include "rdwb/error.hpp"
#include "rdwb/parallel.hpp"

namespace rdwb {

const char* tmap_kind_name(TMapKind kind) {
  switch (kind) {
    case TMapKind::z2_median: return "z2-median";
    case TMapKind::polygrowth_shortest_side: return "polygrowth-shortest-side";
    case TMapKind::derived_from_star: return "derived-from-star";
  }
  return "?";
}

namespace {

// One of the six relabelings of the triangle (1, g, h): original vertex
// positions perm[0..2] become base, G and H.
struct Frame {
  std::array<int, 3> perm{};
  Element base, G, H;
};

Frame canonical_frame(const GroupModel& model, const Element& g, const Element& h) {
  const std::array<Element, 3> V{model.identity(), g, h};
  static constexpr std::array<std::array<int, 3>, 6> perms{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  std::optional<Frame> best;
  for (const auto& p : perms) {
    const Element inv = model.inverse(V[p[0]]);
    Frame f{p, V[p[0]], model.multiply(inv, V[p[1]]), model.multiply(inv, V[p[2]])};
    if (!best || std::tie(f.G, f.H) < std::tie(best->G, best->H)) best = std::move(f);
  }
  return *best;
}

// Centers per frame position, expressed inside the frame.
struct FrameCenters {
  std::array<Element, 3> c;
  std::size_t peripheral = 0;
};

TMapValue transport(const GroupModel& model, const Frame& f, const FrameCenters& fc,
                    const Element& g, const Element& h) {
  std::array<Element, 3> c;
  for (int k = 0; k < 3; ++k) c[f.perm[k]] = model.multiply(f.base, fc.c[k]);
  // Coincident vertices share one center so relabelings that swap them agree.
  const std::array<Element, 3> V{model.identity(), g, h};
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      if (V[i] == V[j]) c[i] = c[j] = std::min(c[i], c[j]);
    }
  }
  if (V[0] == V[1] && V[1] == V[2]) c[0] = c[1] = c[2] = std::min({c[0], c[1], c[2]});
  const Element a_inv = model.inverse(c[0]);
  return {c[0], model.multiply(a_inv, c[1]), model.multiply(a_inv, c[2]), fc.peripheral};
}

FrameCenters star_centers(const StarGeometry& geo, const StarConstants& constants,
                          const Frame& f) {
  const auto& model = geo.model();
  const auto decomps = central_decompositions(geo, constants, f.G, f.H);
  if (decomps.empty()) {
    throw StructuralError("no central decomposition for the triangle (1, " + model.format(f.H) +
                          ", " + model.format(f.G) + ")");
  }
  // The tuple whose centers sit closest to their entrance/exit points; the
  // sorted order breaks ties.
  auto dist = [&](const Element& x, const Element& y) {
    return model.multiply(model.inverse(x), y).length();
  };
  auto score = [&](const CentralDecomposition& d) {
    const auto& w = d.witness;
    const Element u = model.multiply(d.g1, d.eta), v = model.multiply(d.g1, d.eta_prime);
    return dist(d.g1, w.A1) + dist(d.g1, w.A2) + dist(v, w.B1) + dist(v, w.B2) + dist(u, w.C1) +
           dist(u, w.C2);
  };
  const CentralDecomposition* best = &decomps.front();
  auto best_score = score(*best);
  for (const auto& d : decomps) {
    const auto s = score(d);
    if (s < best_score) {
      best = &d;
      best_score = s;
    }
  }
  const auto& d = *best;
  FrameCenters fc;
  fc.c[0] = d.g1;
  fc.c[1] = model.multiply(d.g1, d.eta);
  fc.c[2] = model.multiply(d.g1, d.eta_prime);
  fc.peripheral = d.peripheral;
  return fc;
}

void require_free_abelian(const GroupModel& model) {
  if (model.family() != Family::kFreeAbelian) {
    throw UsageError("tmap_z2 needs a free-abelian model, got " + model.descriptor());
  }
}

}  // namespace

TMapValue tmap_z2(const GroupModel& model, const Element& g, const Element& h) {
  require_free_abelian(model);
  const auto x = model.abelian_coordinates(g);
  const auto y = model.abelian_coordinates(h);
  std::vector<long> m(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::array<long, 3> v{0, x[i], y[i]};
    std::sort(v.begin(), v.end());
    m[i] = v[1];
  }
  const Element one = model.identity();
  return {model.from_abelian_coordinates(m), one, one, 0};
}

TMapValue tmap_polygrowth(const GroupModel& model, const Element& g, const Element& h) {
  const Frame f = canonical_frame(model, g, h);
  const std::size_t lg = f.G.length(), lh = f.H.length();
  const std::size_t lgh = model.distance(f.G, f.H);
  // Shortest side with ties [1,G] < [1,H] < [G,H]; a = G unless it is [1,H].
  const bool side_1h = lh < lg && lh <= lgh;
  FrameCenters fc;
  const Element a_frame = side_1h ? model.identity() : f.G;
  fc.c = {a_frame, a_frame, a_frame};
  return transport(model, f, fc, g, h);
}

TMapValue tmap_from_star(const StarGeometry& geo, const StarConstants& constants,
                         const Element& g, const Element& h) {
  const auto& model = geo.model();
  const Frame f = canonical_frame(model, g, h);
  return transport(model, f, star_centers(geo, constants, f), g, h);
}

TMap make_z2_tmap(const GroupModel& model) {
  require_free_abelian(model);
  TMap t{TMapKind::z2_median, model, PeripheralStructure::trivial(model), {}, {}, {}, {}, {}};
  t.evaluate = [model](const Element& g, const Element& h) { return tmap_z2(model, g, h); };
  t.Q1 = [](int) { return 0.0; };
  t.Q2 = [](int r) { return 2.0 * r; };
  t.Q1_text = "0";
  t.Q2_text = "2r";
  t.Q2_advisory = true;
  return t;
}

TMap make_polygrowth_tmap(const GroupModel& model) {
  TMap t{TMapKind::polygrowth_shortest_side, model, PeripheralStructure::trivial(model),
         {}, {}, {}, {}, {}};
  t.evaluate = [model](const Element& g, const Element& h) {
    return tmap_polygrowth(model, g, h);
  };
  auto growth = std::make_shared<std::map<int, std::size_t>>();
  auto mu = std::make_shared<std::mutex>();
  t.Q1 = [](int) { return 0.0; };
  t.Q2 = [model, growth, mu](int r) {
    std::lock_guard lock(*mu);
    auto it = growth->find(r);
    if (it == growth->end()) it = growth->emplace(r, growth_function(model, r)).first;
    return 2.0 * static_cast<double>(it->second) + 2.0;
  };
  t.Q1_text = "0";
  t.Q2_text = "2f(r)+2";
  return t;
}

TMap make_star_tmap(std::shared_ptr<const StarGeometry> geo, const StarConstants& constants) {
  const auto& model = geo->model();
  TMap t{TMapKind::derived_from_star, model, geo->peripherals(), {}, {}, {}, {}, {}};
  auto memo = std::make_shared<std::map<std::pair<Element, Element>, FrameCenters>>();
  auto mu = std::make_shared<std::mutex>();
  t.evaluate = [geo, constants, memo, mu](const Element& g, const Element& h) {
    const auto& m = geo->model();
    const Frame f = canonical_frame(m, g, h);
    const auto key = std::make_pair(f.G, f.H);
    {
      std::lock_guard lock(*mu);
      if (auto it = memo->find(key); it != memo->end()) return transport(m, f, it->second, g, h);
    }
    const FrameCenters fc = star_centers(*geo, constants, f);
    {
      std::lock_guard lock(*mu);
      memo->emplace(key, fc);
    }
    return transport(m, f, fc, g, h);
  };
  return t;
}

TMapReport verify_tmap(const TMap& tmap, int radius, int workers) {
  const auto& model = tmap.model;
  const auto ball = BallIndex::enumerate(model, radius);
  const std::size_t n = ball.size();
  std::vector<Element> elems(n);
  for (std::size_t i = 0; i < n; ++i) elems[i] = ball.element(static_cast<Rank>(i));

  struct Slot {
    std::optional<TMapViolation> violation;
    std::vector<std::size_t> max_h_prime;
    std::vector<std::size_t> counts;  // distinct (a, g') per r
  };
  std::vector<Slot> slots(n);
  parallel_for(n, [&](std::size_t gi) {
    const Element& g = elems[gi];
    Slot& s = slots[gi];
    s.max_h_prime.assign(static_cast<std::size_t>(radius) + 1, 0);
    std::vector<std::set<std::pair<Element, Element>>> seen(static_cast<std::size_t>(radius) + 1);
    for (std::size_t hi = 0; hi < n; ++hi) {
      const Element& h = elems[hi];
      const TMapValue v = tmap(g, h);
      const auto r = h.length();
      s.max_h_prime[r] = std::max(s.max_h_prime[r], v.h_prime.length());
      seen[r].emplace(v.a, v.g_prime);
      if (s.violation) continue;
      if (v.peripheral >= tmap.peripherals.size() ||
          !tmap.peripherals.contains(v.peripheral, v.g_prime) ||
          !tmap.peripherals.contains(v.peripheral, v.h_prime)) {
        s.violation = TMapViolation{g, h, "membership", v, v};
        continue;
      }
      const TMapValue swapped{v.a, v.h_prime, v.g_prime, v.peripheral};
      if (const auto got = tmap(h, g); !(got == swapped)) {
        s.violation = TMapViolation{g, h, "swap", swapped, got};
        continue;
      }
      const Element h_inv = model.inverse(h);
      const Element hp_inv = model.inverse(v.h_prime);
      const TMapValue rebased{model.multiply(model.multiply(h_inv, v.a), v.h_prime), hp_inv,
                              model.multiply(hp_inv, v.g_prime), v.peripheral};
      if (const auto got = tmap(h_inv, model.multiply(h_inv, g)); !(got == rebased)) {
        s.violation = TMapViolation{g, h, "rebase", rebased, got};
      }
    }
    s.counts.resize(seen.size());
    for (std::size_t r = 0; r < seen.size(); ++r) s.counts[r] = seen[r].size();
  }, workers);

  TMapReport rep;
  rep.kind = tmap.kind;
  rep.radius = radius;
  rep.pairs_checked = n * n;
  const std::size_t rows = static_cast<std::size_t>(radius) + 1;
  rep.max_h_prime.assign(rows, 0);
  rep.max_count.assign(rows, 0);
  std::vector<Point2> h_points, count_points;
  for (std::size_t gi = 0; gi < n; ++gi) {
    const Slot& s = slots[gi];
    if (s.violation && !rep.counterexample) {  // slots are in ShortLex order of g
      rep.condition_i = false;
      rep.counterexample = s.violation;
    }
    for (std::size_t r = 0; r < rows; ++r) {
      rep.max_h_prime[r] = std::max(rep.max_h_prime[r], s.max_h_prime[r]);
      rep.max_count[r] = std::max(rep.max_count[r], s.counts[r]);
      rep.counts.push_back({elems[gi], static_cast<int>(r), s.counts[r], 0.0});
      count_points.push_back({static_cast<double>(r), static_cast<double>(s.counts[r])});
    }
  }
  for (std::size_t r = 0; r < rows; ++r) {
    h_points.push_back({static_cast<double>(r), static_cast<double>(rep.max_h_prime[r])});
    if (tmap.Q1 && static_cast<double>(rep.max_h_prime[r]) > tmap.Q1(static_cast<int>(r))) {
      rep.condition_ii = false;
    }
  }
  rep.Q1_fit = minimal_linear_envelope(h_points);
  rep.Q2_fit = minimal_linear_envelope(count_points);
  for (auto& row : rep.counts) {
    row.Q2 = tmap.Q2 ? tmap.Q2(row.r) : rep.Q2_fit(row.r);
    if (tmap.Q2 && static_cast<double>(row.count) > row.Q2) ++rep.excess;
  }
  rep.condition_iii = rep.excess == 0;
  rep.pass = rep.condition_i && rep.condition_ii && (rep.condition_iii || tmap.Q2_advisory);
  return rep;
}

}  // namespace rdwb
