#include "rdwb/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <memory>
#include <set>

#include "rdwb/ball_cache.hpp"
#include "rdwb/error.hpp"
#include "rdwb/opnorm.hpp"
#include "rdwb/parallel.hpp"
#include "rdwb/seed.hpp"

namespace rdwb {

namespace {

const std::set<std::string>& known_fields() {
  static const std::set<std::string> fields{
      "kind",   "group",   "order",   "peripherals", "radius",  "sigma",    "delta",
      "sigma_max", "delta_max", "p_max", "r1_max",  "r2_max",  "r_max",    "R_values",
      "mode",   "function", "tmap",   "geometry_radius", "samples", "peripheral_bounds",
      "seed",   "budget",  "restarts", "tolerance", "max_iterations", "output", "cache_dir"};
  return fields;
}

template <typename T>
void read(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(key, "has the wrong type");
  }
}

GroupModel parse_group(const ExperimentConfig& c) {
  if (c.group.empty()) throw ConfigError("group", "is required");
  try {
    return GroupModel::parse(c.group, c.order);
  } catch (const Error& e) {
    throw ConfigError("group", e.what());
  }
}

PeripheralStructure parse_peripherals(const ExperimentConfig& c, const GroupModel& model) {
  try {
    return PeripheralStructure::parse(model, c.peripherals);
  } catch (const Error& e) {
    throw ConfigError("peripherals", e.what());
  }
}

void need(bool ok, const char* field, const char* message) {
  if (!ok) throw ConfigError(field, message);
}

std::pair<std::string, int> parse_function(const std::string& f) {
  const auto colon = f.find(':');
  if (colon == std::string::npos) throw ConfigError("function", "expected sphere:<r> or ball:<r>");
  const std::string shape = f.substr(0, colon);
  if (shape != "sphere" && shape != "ball") {
    throw ConfigError("function", "expected sphere:<r> or ball:<r>");
  }
  try {
    std::size_t used = 0;
    const int r = std::stoi(f.substr(colon + 1), &used);
    if (used != f.size() - colon - 1 || r < 0) throw std::invalid_argument("radius");
    return {shape, r};
  } catch (const std::exception&) {
    throw ConfigError("function", "radius must be a nonnegative integer");
  }
}

struct Context {
  const ExperimentConfig& config;
  const RunOptions& options;
  GroupModel model;
  PeripheralStructure peripherals;

  std::shared_ptr<const BallIndex> ball(int radius) const {
    if (!options.cache_dir.empty()) {
      return std::make_shared<const BallIndex>(
          cached_ball(options.cache_dir, model, radius, config.budget));
    }
    return std::make_shared<const BallIndex>(BallIndex::enumerate(model, radius, config.budget));
  }
  StarConstants constants() const { return {config.sigma, config.delta}; }
};

struct Outcome {
  Json payload;
  std::optional<CsvTable> csv;
  bool pass = true;
  std::string summary;
};

Outcome run_ball(const Context& ctx) {
  const auto ball = ctx.ball(ctx.config.radius);
  Outcome out;
  out.payload = to_json(*ball);
  out.summary = "ball of radius " + std::to_string(ball->radius()) + ": " +
                std::to_string(ball->size()) + " elements";
  return out;
}

Outcome run_star_verify(const Context& ctx) {
  const auto& c = ctx.config;
  auto geo = std::make_shared<const StarGeometry>(ctx.ball(2 * c.radius + c.sigma),
                                                  ctx.peripherals, c.sigma);
  const auto mode = c.mode == "exhaustive" ? GeodesicMode::exhaustive : GeodesicMode::canonical;
  StarVerifier verifier(std::move(geo), c.radius, mode, ctx.options.workers);
  const StarReport rep = verifier.run(c.delta, ctx.options.workers);
  Outcome out;
  out.payload = to_json(ctx.model, rep);
  out.pass = rep.pass;
  out.summary = std::string("star-verify ") + (rep.pass ? "pass" : "FAIL") + ", " +
                std::to_string(rep.triangles_checked) + " triangles";
  return out;
}

Outcome run_calibrate(const Context& ctx) {
  const auto& c = ctx.config;
  const auto ball = ctx.ball(2 * c.radius + c.sigma_max);
  const auto mode = c.mode == "exhaustive" ? GeodesicMode::exhaustive : GeodesicMode::canonical;
  Outcome out;
  Json attempts = Json::array();
  std::optional<StarConstants> found;
  for (int sigma = 0; sigma <= c.sigma_max && !found; ++sigma) {
    auto geo = std::make_shared<const StarGeometry>(ball, ctx.peripherals, sigma);
    StarVerifier verifier(std::move(geo), c.radius, mode, ctx.options.workers);
    for (int delta = 0; delta <= c.delta_max; ++delta) {
      const StarReport rep = verifier.run(delta, ctx.options.workers);
      attempts.push_back(to_json(ctx.model, rep));
      if (rep.pass) {
        found = StarConstants{sigma, delta};
        break;
      }
    }
  }
  out.pass = found.has_value();
  if (found) {
    out.payload["sigma"] = found->sigma;
    out.payload["delta"] = found->delta;
    out.summary = "calibrated (sigma, delta) = (" + std::to_string(found->sigma) + ", " +
                  std::to_string(found->delta) + ")";
  } else {
    out.payload["sigma"] = nullptr;
    out.payload["delta"] = nullptr;
    out.summary = "no constants within the search range";
  }
  out.payload["attempts"] = attempts;
  return out;
}

Outcome run_decomp_count(const Context& ctx) {
  const auto& c = ctx.config;
  const auto constants = ctx.constants();
  auto geo = std::make_shared<const StarGeometry>(
      ctx.ball(decomposition_radius(c.p_max, c.r1_max, constants)), ctx.peripherals, c.sigma);
  const auto fit = count_bound_fit(*geo, constants, c.p_max, c.r1_max, ctx.options.workers);
  Outcome out;
  out.payload = to_json(ctx.model, fit);
  for (std::size_t r1 = 0; r1 < fit.max_observed.size(); ++r1) {
    out.pass = out.pass && static_cast<double>(fit.max_observed[r1].count) <=
                               fit.bound(static_cast<int>(r1)) + 1e-9;
  }
  out.summary = "|D_g| <= " + format_number(fit.C1) + " r1 + " + format_number(fit.C2);
  return out;
}

Outcome run_rd_profile(const Context& ctx) {
  const auto& c = ctx.config;
  BestConstantOptions opt;
  opt.restarts = c.restarts;
  if (c.tolerance >= 0) opt.tol = c.tolerance;
  if (c.max_iterations > 0) opt.max_iterations = c.max_iterations;
  opt.seed = c.seed;
  opt.workers = ctx.options.workers;
  const RdProfile profile = rd_profile(ctx.model, c.r_max, opt, c.budget);
  Outcome out;
  out.payload = to_json(profile);
  out.csv = to_csv(profile);
  for (const auto& cell : profile.cells) out.pass = out.pass && cell.lower <= cell.upper * (1 + 1e-9);
  out.summary = "rd-profile over " + std::to_string(profile.cells.size()) + " cells";
  return out;
}

Outcome run_opnorm(const Context& ctx) {
  const auto& c = ctx.config;
  const auto [shape, r] = parse_function(c.function);
  const int R_max = *std::max_element(c.R_values.begin(), c.R_values.end());
  const auto ball = ctx.ball(r + R_max);
  RealFunction x(ctx.model);
  const std::size_t lo = shape == "sphere" ? ball->sphere_begin(r) : 0;
  for (std::size_t i = lo; i < ball->sphere_end(r); ++i) x.set(ball->element(static_cast<Rank>(i)), 1.0);
  OpNormOptions opt;
  if (c.tolerance >= 0) opt.tol = c.tolerance;
  if (c.max_iterations > 0) opt.max_iterations = c.max_iterations;
  opt.budget = c.budget;
  Outcome out;
  Json rows = Json::array();
  double prev = 0.0;
  for (int R : c.R_values) {
    const double v = op_norm_lower(x, R, *ball, opt);
    Json row;
    row["R"] = R;
    row["value"] = fixed_precision(v);
    rows.push_back(row);
    // estimates carry a relative error of at most tol
    if (v < prev * (1 - 2 * opt.tol)) out.pass = false;
    prev = std::max(prev, v);
  }
  out.payload["function"] = c.function;
  out.payload["norm_l2"] = fixed_precision(norm(x));
  out.payload["rows"] = rows;
  out.payload["nondecreasing"] = out.pass;
  out.summary = "op-norm lower bound " + format_number(prev);
  return out;
}

Outcome run_tmap(const Context& ctx) {
  const auto& c = ctx.config;
  std::optional<TMap> tmap;
  if (c.tmap == "z2") {
    try {
      tmap = make_z2_tmap(ctx.model);
    } catch (const UsageError& e) {
      throw ConfigError("group", e.what());
    }
  } else if (c.tmap == "polygrowth") {
    tmap = make_polygrowth_tmap(ctx.model);
  } else {
    const auto constants = ctx.constants();
    const int R = c.geometry_radius >= 0 ? c.geometry_radius
                                         : 2 * c.radius + constants.kappa() + c.sigma;
    auto geo = std::make_shared<const StarGeometry>(ctx.ball(R), ctx.peripherals, c.sigma);
    tmap = make_star_tmap(std::move(geo), constants);
  }
  const TMapReport rep = verify_tmap(*tmap, c.radius, ctx.options.workers);
  Outcome out;
  out.payload = to_json(ctx.model, rep);
  if (!tmap->Q1_text.empty()) out.payload["Q1_claim"] = tmap->Q1_text;
  if (!tmap->Q2_text.empty()) out.payload["Q2_claim"] = tmap->Q2_text;
  out.payload["Q2_advisory"] = tmap->Q2_advisory;
  out.csv = to_csv(ctx.model, rep);
  out.pass = rep.pass;
  out.summary = std::string("tmap ") + tmap_kind_name(rep.kind) + (rep.pass ? " pass" : " FAIL") +
                (rep.excess ? ", " + std::to_string(rep.excess) + " cells above the claimed Q2"
                            : std::string());
  return out;
}

RealFunction random_sphere_function(const BallIndex& ball, int r, Rng& rng) {
  RealFunction f(ball.model());
  for (std::size_t i = ball.sphere_begin(r); i < ball.sphere_end(r); ++i) {
    // about a quarter of the sphere is left out so supports vary
    if (rng.uniform() < 0.25) continue;
    f.set(ball.element(static_cast<Rank>(i)), rng.uniform());
  }
  if (f.empty()) f.set(ball.element(static_cast<Rank>(ball.sphere_begin(r))), 1.0);
  return f;
}

Outcome run_trace(const Context& ctx) {
  const auto& c = ctx.config;
  const auto constants = ctx.constants();
  std::vector<PolynomialBound> bounds;
  for (std::size_t i = 0; i < ctx.peripherals.size(); ++i) {
    if (i < c.peripheral_bounds.size() && !c.peripheral_bounds[i].empty()) {
      bounds.push_back({c.peripheral_bounds[i], PolynomialRole::peripheral});
    } else if (auto b = default_peripheral_bound(ctx.peripherals, i)) {
      bounds.push_back(*b);
    } else {
      throw ConfigError("peripheral_bounds", "no default P_i for " + ctx.peripherals.name(i));
    }
  }
  const int R = c.geometry_radius >= 0
                    ? c.geometry_radius
                    : decomposition_radius(2 * c.r_max, c.r_max, constants);
  auto geo = std::make_shared<const StarGeometry>(ctx.ball(R), ctx.peripherals, c.sigma);
  const ChainFits fits = fit_chain_constants(*geo, constants, c.r_max, c.r_max, ctx.options.workers);
  const PolynomialBound P = assemble_P(bounds, constants.kappa());

  Outcome out;
  DecompositionCache cache;
  Json traces = Json::array();
  std::size_t count = 0, failed = 0;
  for (int s = 0; s < c.samples; ++s) {
    Rng rng(c.seed, "trace/" + std::to_string(s));
    const int r1 = static_cast<int>(rng.uniform_int(1, c.r_max));
    const int r2 = static_cast<int>(rng.uniform_int(1, c.r_max));
    const RealFunction x = random_sphere_function(geo->ball(), r1, rng);
    const RealFunction y = random_sphere_function(geo->ball(), r2, rng);
    for (int p = std::abs(r1 - r2); p <= r1 + r2; ++p) {
      const ChainReport rep = trace_proof_chain(*geo, constants, x, r1, y, r2, p, fits, bounds, &cache);
      Json j = to_json(ctx.model, rep);
      j["sample"] = s;
      traces.push_back(j);
      ++count;
      if (!rep.pass) ++failed;
    }
  }
  Json fj;
  fj["C1"] = fixed_precision(fits.C1);
  fj["C2"] = fixed_precision(fits.C2);
  fj["K1"] = fixed_precision(fits.K1);
  fj["y_multiplicity"] = to_json(fits.y_mult);
  out.payload["fits"] = fj;
  out.payload["P"] = to_json(P);
  out.payload["traces"] = traces;
  out.pass = failed == 0;
  out.summary = "trace: " + std::to_string(count - failed) + "/" + std::to_string(count) +
                " chains pass";
  return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known_fields().count(key)) throw ConfigError(key, "unknown field");
  }
  ExperimentConfig c;
  read(j, "kind", c.kind);
  read(j, "group", c.group);
  read(j, "order", c.order);
  read(j, "peripherals", c.peripherals);
  read(j, "radius", c.radius);
  read(j, "sigma", c.sigma);
  read(j, "delta", c.delta);
  read(j, "sigma_max", c.sigma_max);
  read(j, "delta_max", c.delta_max);
  read(j, "p_max", c.p_max);
  read(j, "r1_max", c.r1_max);
  read(j, "r2_max", c.r2_max);
  read(j, "r_max", c.r_max);
  read(j, "R_values", c.R_values);
  read(j, "mode", c.mode);
  read(j, "function", c.function);
  read(j, "tmap", c.tmap);
  read(j, "geometry_radius", c.geometry_radius);
  read(j, "samples", c.samples);
  read(j, "peripheral_bounds", c.peripheral_bounds);
  read(j, "seed", c.seed);
  read(j, "budget", c.budget);
  read(j, "restarts", c.restarts);
  read(j, "tolerance", c.tolerance);
  read(j, "max_iterations", c.max_iterations);
  read(j, "cache_dir", c.cache_dir);
  if (j.contains("output")) {
    const auto& o = j.at("output");
    if (!o.is_object()) throw ConfigError("output", "must be an object with json/csv paths");
    for (const auto& [key, value] : o.items()) {
      if (key != "json" && key != "csv") throw ConfigError("output." + key, "unknown field");
    }
    try {
      if (o.contains("json")) c.json_out = o.at("json").get<std::string>();
      if (o.contains("csv")) c.csv_out = o.at("csv").get<std::string>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("output", "paths must be strings");
    }
  }
  if (c.kind == "calibrate") {
    if (c.sigma_max < 0 && !j.contains("sigma_max")) c.sigma_max = 2;
    if (c.delta_max < 0 && !j.contains("delta_max")) c.delta_max = 3;
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  return from_json(j);
}

void ExperimentConfig::validate() const {
  const auto& kinds = experiment_kinds();
  if (kind.empty()) throw ConfigError("kind", "is required");
  if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end()) {
    throw ConfigError("kind", "unknown experiment kind '" + kind + "'");
  }
  const GroupModel model = parse_group(*this);
  parse_peripherals(*this, model);
  need(budget > 0, "budget", "must be positive");
  need(mode == "canonical" || mode == "exhaustive", "mode", "must be canonical or exhaustive");
  auto needs_constants = [&] {
    need(sigma >= 0, "sigma", "is required and must be nonnegative");
    need(delta >= 0, "delta", "is required and must be nonnegative");
  };
  if (kind == "ball") {
    need(radius >= 0, "radius", "is required and must be nonnegative");
  } else if (kind == "star-verify") {
    need(radius >= 0, "radius", "is required and must be nonnegative");
    needs_constants();
    need(mode != "exhaustive" || radius <= 4, "mode", "exhaustive geodesics need radius <= 4");
  } else if (kind == "calibrate") {
    need(radius >= 0, "radius", "is required and must be nonnegative");
    need(sigma_max >= 0, "sigma_max", "must be nonnegative");
    need(delta_max >= 0, "delta_max", "must be nonnegative");
  } else if (kind == "decomp-count") {
    needs_constants();
    need(p_max >= 0, "p_max", "is required and must be nonnegative");
    need(r1_max >= 0, "r1_max", "is required and must be nonnegative");
  } else if (kind == "rd-profile") {
    need(r_max >= 1, "r_max", "is required and must be at least 1");
    need(restarts >= 1, "restarts", "must be at least 1");
  } else if (kind == "opnorm") {
    need(!R_values.empty(), "R_values", "is required");
    for (int R : R_values) need(R >= 0, "R_values", "entries must be nonnegative");
    parse_function(function);
  } else if (kind == "tmap-verify") {
    need(radius >= 0, "radius", "is required and must be nonnegative");
    need(tmap == "z2" || tmap == "polygrowth" || tmap == "star", "tmap",
         "must be z2, polygrowth or star");
    if (tmap == "star") needs_constants();
    if (tmap == "z2") need(model.family() == Family::kFreeAbelian, "group", "z2 needs free-abelian");
  } else if (kind == "trace") {
    needs_constants();
    need(r_max >= 1, "r_max", "is required and must be at least 1");
    need(samples >= 1, "samples", "must be at least 1");
  }
}

Json ExperimentConfig::echo() const {
  Json j;
  j["kind"] = kind;
  j["group"] = group;
  j["order"] = order;
  j["peripherals"] = peripherals;
  auto opt_int = [&](const char* key, int v) {
    if (v >= 0) j[key] = v;
  };
  opt_int("radius", radius);
  opt_int("sigma", sigma);
  opt_int("delta", delta);
  opt_int("sigma_max", sigma_max);
  opt_int("delta_max", delta_max);
  opt_int("p_max", p_max);
  opt_int("r1_max", r1_max);
  opt_int("r2_max", r2_max);
  opt_int("r_max", r_max);
  if (!R_values.empty()) j["R_values"] = R_values;
  j["mode"] = mode;
  if (kind == "opnorm") j["function"] = function;
  if (kind == "tmap-verify") j["tmap"] = tmap;
  opt_int("geometry_radius", geometry_radius);
  if (kind == "trace") j["samples"] = samples;
  if (!peripheral_bounds.empty()) j["peripheral_bounds"] = peripheral_bounds;
  j["seed"] = seed;
  j["budget"] = budget;
  if (kind == "rd-profile") j["restarts"] = restarts;
  if (tolerance >= 0) j["tolerance"] = fixed_precision(tolerance);
  if (max_iterations > 0) j["max_iterations"] = max_iterations;
  return j;
}

ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const GroupModel model = parse_group(config);
  Context ctx{config, options, model, parse_peripherals(config, model)};
  const auto start = std::chrono::steady_clock::now();

  Outcome out;
  const auto& k = config.kind;
  if (k == "ball") out = run_ball(ctx);
  else if (k == "star-verify") out = run_star_verify(ctx);
  else if (k == "calibrate") out = run_calibrate(ctx);
  else if (k == "decomp-count") out = run_decomp_count(ctx);
  else if (k == "rd-profile") out = run_rd_profile(ctx);
  else if (k == "opnorm") out = run_opnorm(ctx);
  else if (k == "tmap-verify") out = run_tmap(ctx);
  else out = run_trace(ctx);

  ExperimentReport rep;
  rep.exit_code = out.pass ? kExitPass : kExitProperty;
  rep.document["version"] = kArtifactVersion;
  rep.document["kind"] = config.kind;
  rep.document["config"] = config.echo();
  rep.document["pass"] = out.pass;
  rep.document["exit_code"] = rep.exit_code;
  if (options.timing) {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    rep.document["timing_seconds"] = fixed_precision(dt.count());
  }
  rep.document["payload"] = std::move(out.payload);
  rep.csv = std::move(out.csv);
  rep.summary = std::move(out.summary);
  return rep;
}

void persist_report(const ExperimentReport& report, const std::filesystem::path& json_path,
                    const std::filesystem::path& csv_path) {
  if (!json_path.empty()) write_file(json_path, dump(report.document));
  if (report.csv && !csv_path.empty()) write_file(csv_path, report.csv->str());
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const StructuralError*>(&e)) return kExitProperty;
  if (dynamic_cast<const ResourceError*>(&e) || dynamic_cast<const IoError*>(&e) ||
      dynamic_cast<const IntegrityError*>(&e) ||
      dynamic_cast<const RangeError*>(&e) || dynamic_cast<const std::bad_alloc*>(&e)) {
    return kExitResource;
  }
  return kExitConfig;
}

}  // namespace rdwb
