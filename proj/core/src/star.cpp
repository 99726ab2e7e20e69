#include "rdwb/star.hpp"

#include <atomic>
#include <numeric>
#include <string>

#include "rdwb/error.hpp"
#include "rdwb/parallel.hpp"

namespace rdwb {

namespace {

Rank find_root(std::vector<Rank>& uf, Rank x) {
  while (uf[x] != x) {
    uf[x] = uf[uf[x]];
    x = uf[x];
  }
  return x;
}

}  // namespace

StarGeometry::StarGeometry(std::shared_ptr<const BallIndex> ball,
                           PeripheralStructure peripherals, int sigma)
    : ball_(std::move(ball)), peripherals_(std::move(peripherals)), sigma_(sigma) {
  if (!ball_) throw UsageError("geometry needs a ball");
  if (sigma_ < 0) throw UsageError("sigma must be nonnegative");
  if (!peripherals_.model().same_as(ball_->model())) {
    throw UsageError("peripheral structure and ball use different models");
  }
  if (peripherals_.size() > 255) throw UsageError("at most 255 peripheral subgroups");

  const std::size_t n = ball_->size();
  const auto letters = static_cast<Letter>(model().alphabet_size());
  keys_.resize(peripherals_.size());
  for (std::size_t i = 0; i < peripherals_.size(); ++i) {
    std::vector<Rank> uf(n);
    std::iota(uf.begin(), uf.end(), Rank{0});
    for (Rank x = 0; x < n; ++x) {
      for (Letter l = 0; l < letters; ++l) {
        if (!peripherals_.contains_letter(i, l)) continue;
        const Rank y = ball_->neighbor(x, l);
        if (y == kNoRank) continue;
        const Rank rx = find_root(uf, x), ry = find_root(uf, y);
        // smaller rank wins, so roots are ShortLex-least members
        if (rx < ry) uf[ry] = rx;
        else if (ry < rx) uf[rx] = ry;
      }
    }
    for (Rank x = 0; x < n; ++x) uf[x] = find_root(uf, x);
    keys_[i] = std::move(uf);
  }

  const int limit_len = ball_->radius() - sigma_;
  nbhd_limit_ = limit_len < 0 ? 0 : ball_->sphere_end(limit_len);
  nbhd_offsets_.assign(nbhd_limit_ + 1, 0);
  std::vector<Rank> around;
  std::vector<CosetId> ids;
  for (Rank v = 0; v < nbhd_limit_; ++v) {
    ball_around(v, sigma_, around);
    ids.clear();
    for (Rank y : around) {
      for (std::size_t i = 0; i < peripherals_.size(); ++i) ids.push_back(coset_id(i, y));
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    nbhd_ids_.insert(nbhd_ids_.end(), ids.begin(), ids.end());
    nbhd_offsets_[v + 1] = nbhd_ids_.size();
  }
}

std::shared_ptr<const StarGeometry> StarGeometry::build(const GroupModel& model,
                                                        const PeripheralStructure& peripherals,
                                                        int sigma, int ball_radius,
                                                        std::size_t budget) {
  auto ball = std::make_shared<const BallIndex>(BallIndex::enumerate(model, ball_radius, budget));
  return std::make_shared<const StarGeometry>(std::move(ball), peripherals, sigma);
}

Rank StarGeometry::rank(const Element& e) const {
  const auto r = ball_->find(e);
  if (!r) {
    throw RangeError(model().format(e) + " lies outside the enumerated ball of radius " +
                     std::to_string(ball_->radius()));
  }
  return *r;
}

Coset StarGeometry::coset(CosetId id) const {
  return Coset{id_peripheral(id), ball_->element(id_key(id))};
}

StarGeometry::CosetId StarGeometry::id_of(const Coset& c) const {
  if (c.peripheral >= peripherals_.size()) throw UsageError("peripheral index out of range");
  const Rank k = rank(c.key);
  if (key_rank(c.peripheral, k) != k) {
    throw UsageError(model().format(c.key) + " is not the canonical key of its coset");
  }
  return pack(k, c.peripheral);
}

Coset StarGeometry::coset_of(const Element& g, std::size_t i) const {
  if (i >= peripherals_.size()) throw UsageError("peripheral index out of range");
  return coset(coset_id(i, rank(g)));
}

std::span<const StarGeometry::CosetId> StarGeometry::neighborhood(Rank v) const {
  if (v >= nbhd_limit_) {
    throw ResourceError("ball of radius " + std::to_string(ball_->radius()) +
                        " cannot certify the " + std::to_string(sigma_) +
                        "-neighbourhood of " + model().format(ball_->element(v)));
  }
  return {nbhd_ids_.data() + nbhd_offsets_[v], nbhd_offsets_[v + 1] - nbhd_offsets_[v]};
}

std::size_t StarGeometry::coset_distance(Rank v, CosetId id) const {
  std::vector<Rank> around;
  for (int t = 0; t <= sigma_; ++t) {
    ball_around(v, t, around);
    for (Rank y : around) {
      if (in_coset(y, id)) return static_cast<std::size_t>(t);
    }
  }
  throw UsageError("coset is not within sigma of the vertex");
}

std::vector<Rank> StarGeometry::path(Rank from, std::span<const Letter> word) const {
  std::vector<Rank> out;
  out.reserve(word.size() + 1);
  out.push_back(from);
  Rank cur = from;
  for (Letter l : word) {
    cur = ball_->neighbor(cur, l);
    if (cur == kNoRank) {
      throw ResourceError("side leaves the enumerated ball of radius " +
                          std::to_string(ball_->radius()));
    }
    out.push_back(cur);
  }
  return out;
}

std::vector<Rank> StarGeometry::side(Rank from, Rank to) const {
  const Element step = model().multiply(ball_->element(ball_->inverse(from)), ball_->element(to));
  return path(from, step.word());
}

std::vector<std::vector<Rank>> StarGeometry::all_sides(Rank from, Rank to,
                                                       std::size_t cap) const {
  std::vector<std::vector<Rank>> out;
  std::vector<Rank> cur{from};
  const auto letters = static_cast<Letter>(model().alphabet_size());
  const Element target = ball_->element(to);
  auto extend = [&](auto&& self, Rank z, std::size_t remaining) -> void {
    if (remaining == 0) {
      if (out.size() >= cap) throw ResourceError("too many geodesics between two vertices");
      out.push_back(cur);
      return;
    }
    for (Letter l = 0; l < letters; ++l) {
      const Rank y = ball_->neighbor(z, l);
      if (y == kNoRank) {
        throw ResourceError("geodesic leaves the enumerated ball of radius " +
                            std::to_string(ball_->radius()));
      }
      if (model().distance(ball_->element(y), target) + 1 != remaining) continue;
      cur.push_back(y);
      self(self, y, remaining - 1);
      cur.pop_back();
    }
  };
  extend(extend, from, distance(from, to));
  // letters that coincide as elements (order-2 generators) give duplicates
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void StarGeometry::hits(std::span<const Rank> path, std::vector<SideHit>& out) const {
  std::vector<std::pair<CosetId, std::uint32_t>> seen;
  for (std::uint32_t j = 0; j < path.size(); ++j) {
    for (CosetId id : neighborhood(path[j])) seen.emplace_back(id, j);
  }
  std::sort(seen.begin(), seen.end());
  out.clear();
  for (std::size_t s = 0; s < seen.size();) {
    std::size_t e = s;
    while (e < seen.size() && seen[e].first == seen[s].first) ++e;
    const std::uint32_t first = seen[s].second, last = seen[e - 1].second;
    out.push_back(SideHit{seen[s].first, path[first], path[last],
                          last - first + 1 != e - s});
    s = e;
  }
}

void StarGeometry::ball_around(Rank c, int t, std::vector<Rank>& out) const {
  out.assign(1, c);
  std::vector<Rank> frontier{c}, next, merged;
  const auto letters = static_cast<Letter>(model().alphabet_size());
  for (int d = 1; d <= t; ++d) {
    next.clear();
    for (Rank x : frontier) {
      for (Letter l = 0; l < letters; ++l) {
        const Rank y = ball_->neighbor(x, l);
        if (y == kNoRank) {
          throw ResourceError("ball of radius " + std::to_string(ball_->radius()) +
                              " too small for a distance-" + std::to_string(t) +
                              " neighbourhood");
        }
        next.push_back(y);
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    frontier.clear();
    std::set_difference(next.begin(), next.end(), out.begin(), out.end(),
                        std::back_inserter(frontier));
    merged.clear();
    std::merge(out.begin(), out.end(), frontier.begin(), frontier.end(),
               std::back_inserter(merged));
    out.swap(merged);
  }
}

std::size_t StarGeometry::distance(Rank x, Rank y) const {
  if (x == y) return 0;
  return model().distance(ball_->element(x), ball_->element(y));
}

bool StarGeometry::within(Rank x, Rank y, int t) const {
  if (t < 0) return false;
  if (x == y) return true;
  if (t == 0) return false;
  const auto letters = static_cast<Letter>(model().alphabet_size());
  for (Letter l = 0; l < letters; ++l) {
    if (ball_->neighbor(x, l) == y) return true;
  }
  if (t == 1) return false;
  return distance(x, y) <= static_cast<std::size_t>(t);
}

std::optional<TriangleMatch> central_match(const StarGeometry& geo,
                                           std::span<const SideHit> ab,
                                           std::span<const SideHit> bc,
                                           std::span<const SideHit> ca, int delta) {
  std::optional<TriangleMatch> found;
  if (delta <= 0) return found;
  for_each_common_coset(ab, bc, ca, [&](const TriangleMatch& m) {
    if (!satisfies_delta(geo, m, delta)) return false;
    found = m;
    return true;
  });
  return found;
}

std::optional<std::pair<Element, Element>> entrance_exit(const StarGeometry& geo,
                                                         const Element& from,
                                                         std::span<const Letter> side_word,
                                                         const Coset& coset) {
  const auto id = geo.id_of(coset);
  const auto vertices = geo.path(geo.rank(from), side_word);
  std::optional<std::pair<Element, Element>> out;
  std::optional<Rank> entry, exit;
  for (Rank v : vertices) {
    const auto nb = geo.neighborhood(v);
    if (std::binary_search(nb.begin(), nb.end(), id)) {
      if (!entry) entry = v;
      exit = v;
    }
  }
  if (entry) out.emplace(geo.ball().element(*entry), geo.ball().element(*exit));
  return out;
}

std::optional<std::pair<Element, Element>> entrance_exit(const StarGeometry& geo,
                                                         const Element& from,
                                                         const Element& to,
                                                         const Coset& coset) {
  const Element step = geo.model().multiply(geo.model().inverse(from), to);
  return entrance_exit(geo, from, step.word(), coset);
}

namespace {

CentralCosetResult describe(const StarGeometry& geo, const TriangleMatch& m) {
  const auto& ball = geo.ball();
  CentralCosetResult r;
  const auto id = m.ab->coset;
  r.coset = geo.coset(id);
  r.record.A1 = ball.element(m.ab->entry);
  r.record.B2 = ball.element(m.ab->exit);
  r.record.B1 = ball.element(m.bc->entry);
  r.record.C2 = ball.element(m.bc->exit);
  r.record.C1 = ball.element(m.ca->entry);
  r.record.A2 = ball.element(m.ca->exit);
  r.record.excursion = m.ab->excursion || m.bc->excursion || m.ca->excursion;
  r.pair_distances = {geo.distance(m.ab->entry, m.ca->exit),
                      geo.distance(m.bc->entry, m.ab->exit),
                      geo.distance(m.ca->entry, m.bc->exit)};
  const std::array<Rank, 6> pts{m.ab->entry, m.ab->exit, m.bc->entry,
                                m.bc->exit,  m.ca->entry, m.ca->exit};
  for (std::size_t k = 0; k < 6; ++k) r.coset_distances[k] = geo.coset_distance(pts[k], id);
  return r;
}

void check_sigma(const StarGeometry& geo, const StarConstants& c) {
  if (geo.sigma() != c.sigma) {
    throw UsageError("geometry was built for sigma=" + std::to_string(geo.sigma()) +
                     ", constants ask for sigma=" + std::to_string(c.sigma));
  }
}

}  // namespace

std::vector<CentralCosetResult> find_central_cosets(const StarGeometry& geo,
                                                    const Element& A, const Element& B,
                                                    const Element& C,
                                                    const StarConstants& constants) {
  check_sigma(geo, constants);
  const Rank a = geo.rank(A), b = geo.rank(B), c = geo.rank(C);
  std::vector<SideHit> ab, bc, ca;
  geo.hits(geo.side(a, b), ab);
  geo.hits(geo.side(b, c), bc);
  geo.hits(geo.side(c, a), ca);
  std::vector<CentralCosetResult> out;
  if (constants.delta <= 0) return out;
  for_each_common_coset(ab, bc, ca, [&](const TriangleMatch& m) {
    if (satisfies_delta(geo, m, constants.delta)) out.push_back(describe(geo, m));
    return false;
  });
  return out;
}

std::optional<CentralCosetResult> find_central_coset(const StarGeometry& geo,
                                                     const Element& A, const Element& B,
                                                     const Element& C,
                                                     const StarConstants& constants) {
  check_sigma(geo, constants);
  const Rank a = geo.rank(A), b = geo.rank(B), c = geo.rank(C);
  std::vector<SideHit> ab, bc, ca;
  geo.hits(geo.side(a, b), ab);
  geo.hits(geo.side(b, c), bc);
  geo.hits(geo.side(c, a), ca);
  std::optional<CentralCosetResult> out;
  if (auto m = central_match(geo, ab, bc, ca, constants.delta)) out = describe(geo, *m);
  return out;
}

StarVerifier::StarVerifier(std::shared_ptr<const StarGeometry> geometry, int radius,
                           GeodesicMode mode, int workers)
    : geo_(std::move(geometry)), radius_(radius) {
  if (radius < 0) throw UsageError("radius must be nonnegative");
  if (mode == GeodesicMode::exhaustive && radius > 4) {
    throw UsageError("exhaustive geodesic mode is limited to radius 4");
  }
  if (geo_->ball().radius() < radius) {
    throw ResourceError("ball of radius " + std::to_string(geo_->ball().radius()) +
                        " is smaller than the triangle radius " + std::to_string(radius));
  }
  n_ = geo_->ball().sphere_end(radius);
  const std::size_t pairs = n_ * n_;
  std::vector<std::vector<std::vector<SideHit>>> per_pair(pairs);
  parallel_for(
      pairs,
      [&](std::size_t p) {
        const auto a = static_cast<Rank>(p / n_), b = static_cast<Rank>(p % n_);
        if (mode == GeodesicMode::canonical) {
          per_pair[p].resize(1);
          geo_->hits(geo_->side(a, b), per_pair[p][0]);
        } else {
          const auto paths = geo_->all_sides(a, b);
          per_pair[p].resize(paths.size());
          for (std::size_t k = 0; k < paths.size(); ++k) geo_->hits(paths[k], per_pair[p][k]);
        }
      },
      workers);
  offsets_.assign(pairs + 1, 0);
  for (std::size_t p = 0; p < pairs; ++p) {
    offsets_[p + 1] = offsets_[p] + per_pair[p].size();
    for (auto& h : per_pair[p]) sides_.push_back(std::move(h));
  }
}

StarReport StarVerifier::run(int delta, int workers) const {
  StarReport report;
  report.constants = StarConstants{geo_->sigma(), delta};
  report.radius = radius_;
  const std::size_t n = n_;

  struct Slice {
    bool failed = false;
    std::size_t b = 0, c = 0;
    std::uint64_t excursions = 0;
  };
  std::vector<Slice> slices(n);
  std::atomic<std::size_t> first_fail{n};

  auto triangle_ok = [&](std::size_t a, std::size_t b, std::size_t c, bool& excursion) {
    for (const auto& s0 : variants(a, b)) {
      for (const auto& s1 : variants(b, c)) {
        for (const auto& s2 : variants(c, a)) {
          const auto m = central_match(*geo_, s0, s1, s2, delta);
          if (!m) return false;
          excursion = excursion || m->ab->excursion || m->bc->excursion || m->ca->excursion;
        }
      }
    }
    return true;
  };

  parallel_for(
      n,
      [&](std::size_t a) {
        Slice& s = slices[a];
        for (std::size_t b = 0; b < n; ++b) {
          if (a > first_fail.load(std::memory_order_relaxed)) return;
          for (std::size_t c = 0; c < n; ++c) {
            bool excursion = false;
            if (!triangle_ok(a, b, c, excursion)) {
              s.failed = true;
              s.b = b;
              s.c = c;
              std::size_t cur = first_fail.load();
              while (a < cur && !first_fail.compare_exchange_weak(cur, a)) {
              }
              return;
            }
            if (excursion) ++s.excursions;
          }
        }
      },
      workers);

  const std::size_t fail = first_fail.load();
  const std::size_t upto = fail == n ? n : fail + 1;
  for (std::size_t a = 0; a < upto; ++a) report.excursion_triangles += slices[a].excursions;
  if (fail == n) {
    report.pass = true;
    report.triangles_checked = static_cast<std::uint64_t>(n) * n * n;
  } else {
    const Slice& s = slices[fail];
    report.pass = false;
    report.triangles_checked = static_cast<std::uint64_t>(fail) * n * n + s.b * n + s.c + 1;
    const auto& ball = geo_->ball();
    report.counterexample = std::array<Element, 3>{
        ball.element(static_cast<Rank>(fail)), ball.element(static_cast<Rank>(s.b)),
        ball.element(static_cast<Rank>(s.c))};
  }
  return report;
}

StarReport verify_star(const GroupModel& model, const PeripheralStructure& peripherals,
                       const StarConstants& constants, int radius,
                       const StarVerifyOptions& options) {
  if (constants.sigma < 0 || constants.delta < 0) {
    throw UsageError("star constants must be nonnegative");
  }
  auto geo = StarGeometry::build(model, peripherals, constants.sigma,
                                 2 * radius + constants.sigma, options.budget);
  StarVerifier verifier(std::move(geo), radius, options.mode, options.workers);
  return verifier.run(constants.delta, options.workers);
}

std::optional<StarConstants> calibrate_constants(const GroupModel& model,
                                                 const PeripheralStructure& peripherals,
                                                 int radius, int sigma_max, int delta_max,
                                                 const StarVerifyOptions& options) {
  if (sigma_max < 0 || delta_max < 0) return std::nullopt;
  auto ball = std::make_shared<const BallIndex>(
      BallIndex::enumerate(model, 2 * radius + sigma_max, options.budget));
  for (int sigma = 0; sigma <= sigma_max; ++sigma) {
    auto geo = std::make_shared<const StarGeometry>(ball, peripherals, sigma);
    StarVerifier verifier(std::move(geo), radius, options.mode, options.workers);
    for (int delta = 0; delta <= delta_max; ++delta) {
      if (verifier.run(delta, options.workers).pass) return StarConstants{sigma, delta};
    }
  }
  return std::nullopt;
}

}  // namespace rdwb
