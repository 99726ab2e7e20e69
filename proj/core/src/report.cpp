#include "rdwb/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rdwb/error.hpp"

namespace rdwb {

double fixed_precision(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(format_number(v).c_str(), nullptr);
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", kReportPrecision, v);
  return buf;
}

namespace {

Json num(double v) {
  if (!std::isfinite(v)) return format_number(v);  // "inf"/"nan" as strings
  return fixed_precision(v);
}

Json elements(const GroupModel& model, const std::vector<Element>& es) {
  Json out = Json::array();
  for (const auto& e : es) out.push_back(model.format(e));
  return out;
}

}  // namespace

Json to_json(const GroupModel& model, const Element& e) { return model.format(e); }

Json to_json(const LinearEnvelope& env) {
  Json j;
  j["slope"] = num(env.slope);
  j["intercept"] = num(env.intercept);
  return j;
}

Json to_json(const PolynomialBound& p) {
  Json j;
  j["role"] = role_name(p.role);
  Json c = Json::array();
  for (double v : p.coefficients) c.push_back(num(v));
  j["coefficients"] = c;
  j["text"] = p.format();
  return j;
}

Json to_json(const BallIndex& ball) {
  Json j;
  j["radius"] = ball.radius();
  j["size"] = ball.size();
  j["sphere_sizes"] = ball.sphere_sizes();
  return j;
}

Json to_json(const GroupModel& model, const StarReport& r) {
  Json j;
  j["pass"] = r.pass;
  j["sigma"] = r.constants.sigma;
  j["delta"] = r.constants.delta;
  j["radius"] = r.radius;
  j["triangles_checked"] = r.triangles_checked;
  j["excursion_triangles"] = r.excursion_triangles;
  if (r.counterexample) {
    j["counterexample"] = elements(model, {(*r.counterexample)[0], (*r.counterexample)[1],
                                           (*r.counterexample)[2]});
  } else {
    j["counterexample"] = nullptr;
  }
  return j;
}

Json to_json(const GroupModel& model, const CountBoundFit& fit) {
  Json j;
  j["C1"] = num(fit.C1);
  j["C2"] = num(fit.C2);
  Json rows = Json::array();
  for (std::size_t r1 = 0; r1 < fit.max_observed.size(); ++r1) {
    const auto& w = fit.max_observed[r1];
    Json row;
    row["r1"] = r1;
    row["count"] = w.count;
    row["bound"] = num(fit.bound(static_cast<int>(r1)));
    row["g"] = model.format(w.g);
    row["p"] = w.p;
    row["r2"] = w.r2;
    rows.push_back(row);
  }
  j["max_observed"] = rows;
  return j;
}

Json to_json(const RdProfile& profile) {
  Json j;
  Json cells = Json::array();
  for (const auto& c : profile.cells) {
    Json row;
    row["r1"] = c.r1;
    row["r2"] = c.r2;
    row["p"] = c.p;
    row["lower"] = num(c.lower);
    row["upper"] = num(c.upper);
    row["restarts"] = c.restarts;
    cells.push_back(row);
  }
  j["cells"] = cells;
  Json C = Json::array(), Cu = Json::array();
  for (double v : profile.C) C.push_back(num(v));
  for (double v : profile.C_upper) Cu.push_back(num(v));
  j["C"] = C;
  j["C_upper"] = Cu;
  return j;
}

Json to_json(const GroupModel& model, const ChainReport& r) {
  Json j;
  j["r1"] = r.r1;
  j["r2"] = r.r2;
  j["p"] = r.p;
  j["pass"] = r.pass;
  j["norm_sq"] = num(r.norm_sq);
  j["P"] = num(r.P_value);
  j["Q"] = num(r.Q_value);
  j["final_bound"] = num(r.final_bound);
  Json steps = Json::array();
  for (const auto& s : r.steps) {
    Json row;
    row["name"] = s.name;
    row["lhs"] = num(s.lhs);
    row["rhs"] = num(s.rhs);
    row["pass"] = s.pass;
    steps.push_back(row);
  }
  j["steps"] = steps;
  j["terms"] = r.terms.size();
  j["structural_failure"] = r.structural_failure;
  Json missing = Json::array();
  for (const auto& [h, k] : r.missing) missing.push_back({model.format(h), model.format(k)});
  j["missing"] = missing;
  return j;
}

Json to_json(const GroupModel& model, const TMapReport& r) {
  Json j;
  j["kind"] = tmap_kind_name(r.kind);
  j["radius"] = r.radius;
  j["pairs_checked"] = r.pairs_checked;
  j["pass"] = r.pass;
  j["condition_i"] = r.condition_i;
  if (r.counterexample) {
    const auto& v = *r.counterexample;
    auto value = [&](const TMapValue& t) {
      Json x;
      x["a"] = model.format(t.a);
      x["g_prime"] = model.format(t.g_prime);
      x["h_prime"] = model.format(t.h_prime);
      x["peripheral"] = t.peripheral;
      return x;
    };
    Json c;
    c["g"] = model.format(v.g);
    c["h"] = model.format(v.h);
    c["rule"] = v.rule;
    c["expected"] = value(v.expected);
    c["actual"] = value(v.actual);
    j["counterexample"] = c;
  } else {
    j["counterexample"] = nullptr;
  }
  j["condition_ii"] = r.condition_ii;
  j["max_h_prime"] = r.max_h_prime;
  j["Q1_fit"] = to_json(r.Q1_fit);
  j["condition_iii"] = r.condition_iii;
  j["excess"] = r.excess;
  j["max_count"] = r.max_count;
  j["Q2_fit"] = to_json(r.Q2_fit);
  return j;
}

std::string CsvTable::str() const {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out.str();
}

CsvTable to_csv(const RdProfile& profile) {
  CsvTable t{{"r1", "r2", "p", "lower", "upper", "restarts"}, {}};
  for (const auto& c : profile.cells) {
    t.rows.push_back({std::to_string(c.r1), std::to_string(c.r2), std::to_string(c.p),
                      format_number(c.lower), format_number(c.upper),
                      std::to_string(c.restarts)});
  }
  return t;
}

CsvTable to_csv(const GroupModel& model, const TMapReport& report) {
  CsvTable t{{"g", "r", "count", "Q2"}, {}};
  for (const auto& row : report.counts) {
    t.rows.push_back({model.format(row.g), std::to_string(row.r), std::to_string(row.count),
                      format_number(row.Q2)});
  }
  return t;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace rdwb
