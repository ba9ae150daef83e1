#include "anisotetra/report.hpp"

#include <cmath>
#include <cstdio>

namespace anisotetra {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json number(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

namespace {

Json point(const Point3& p) { return Json::array({p[0], p[1], p[2]}); }

Json matrix(const Matrix3& m) {
  Json rows = Json::array();
  for (int i = 0; i < 3; ++i) rows.push_back(Json::array({m(i, 0), m(i, 1), m(i, 2)}));
  return rows;
}

template <std::size_t N>
Json array(const std::array<double, N>& a) {
  Json out = Json::array();
  for (double x : a) out.push_back(number(x));
  return out;
}

Json table(const std::array<std::array<double, 4>, 4>& a) {
  Json out = Json::array();
  for (const auto& row : a) out.push_back(array(row));
  return out;
}

}  // namespace

Json to_json(const Tetrahedron& t) {
  Json out = Json::array();
  for (const auto& v : t.v) out.push_back(point(v));
  return out;
}

Json to_json(const Classification& c) {
  return {{"type", to_string(c.kind)},
          {"perm", c.perm},
          {"alpha", array(c.alpha)},
          {"e1", {c.e1.a, c.e1.b}},
          {"e2", {c.e2.a, c.e2.b}}};
}

Json to_json(const StandardPosition& sp) {
  Json verts = Json::array();
  for (const auto& v : sp.vertices()) verts.push_back(point(v));
  return {{"type", to_string(sp.kind)},
          {"perm", sp.perm},
          {"alpha", array(sp.alpha)},
          {"s1", sp.s1},
          {"t1", sp.t1},
          {"s21", sp.s21},
          {"s22", sp.s22},
          {"t2", sp.t2},
          {"vertices", verts},
          {"rotation", matrix(sp.motion.rotation)},
          {"translation", point(sp.motion.translation)},
          {"mirror", sp.motion.mirror}};
}

Json to_json(const TransformMatrices& m) {
  return {{"A", matrix(m.A)},
          {"D", matrix(m.D)},
          {"X", matrix(m.X)},
          {"Y", matrix(m.Y)},
          {"norm_X", m.norm_X},
          {"norm_X_inv", m.norm_X_inv},
          {"norm_Y", m.norm_Y},
          {"norm_Y_inv", m.norm_Y_inv},
          {"norm_A", m.norm_A},
          {"norm_A_inv", m.norm_A_inv},
          {"norm_A_bound", m.norm_A_bound},
          {"norm_A_inv_bound", m.norm_A_inv_bound}};
}

Json to_json(const GeometryReport& g) {
  return {{"edges_sorted", array(g.h)},
          {"h_T", g.h_T()},
          {"volume", g.volume},
          {"R_T", g.R_T},
          {"H_T", g.H_T},
          {"theta", table(g.theta)},
          {"psi", table(g.psi)},
          {"phi", table(g.phi)},
          {"max_angle", g.max_angle}};
}

Json to_json(const MacConstants& c) {
  return {{"gamma_max", c.gamma_max}, {"delta", c.delta}, {"sin_delta", c.sin_delta},
          {"C0", c.C0},               {"C1", c.C1},       {"D", c.D}};
}

Json to_json(const ErrorRatioResult& r) {
  return {{"k", r.k},
          {"m", r.m},
          {"p", std::isinf(r.p) ? Json("inf") : Json(r.p)},
          {"error", number(r.error)},
          {"seminorm_hi", number(r.seminorm_hi)},
          {"bound_factor", number(r.bound_factor)},
          {"ratio", number(r.ratio)},
          {"indeterminate", r.indeterminate},
          {"refinement_warning", r.refinement_warning},
          {"approximate", r.approximate},
          {"geometry", to_json(r.geometry)}};
}

Json to_json(const SweepResult& s) {
  Json rows = Json::array();
  for (const auto& r : s.rows)
    rows.push_back({{"level", r.level},
                    {"alpha", array(r.alpha)},
                    {"R_T", r.R_T},
                    {"h_T", r.h_T},
                    {"max_ratio", number(r.max_ratio)},
                    {"max_squeeze", number(r.max_squeeze)},
                    {"argmax_field", r.argmax_field},
                    {"indeterminate", r.indeterminate},
                    {"refinement_warning", r.refinement_warning}});
  return {{"k", s.k},
          {"m", s.m},
          {"p", std::isinf(s.p) ? Json("inf") : Json(s.p)},
          {"type", to_string(s.type)},
          {"max_ratio", number(s.max_ratio)},
          {"min_ratio", number(s.min_ratio)},
          {"variation", number(s.variation)},
          {"slope", number(s.slope)},
          {"rows", rows}};
}

Json to_json(const EquivalenceReport& r) {
  return {{"n", r.n},
          {"violations", r.violations},
          {"min_R_over_H", r.min_ratio},
          {"max_R_over_H", r.max_ratio},
          {"worst_margin", r.worst_margin},
          {"extremal", to_json(r.extremal)}};
}

Json to_json(const MacDirection& d) {
  Json ce = Json::array();
  for (const auto& t : d.counterexamples) ce.push_back(to_json(t));
  Json out{{"requested", d.requested},
           {"checked", d.checked},
           {"violations", d.violations},
           {"max_value", d.max_value},
           {"generation_failed", d.generation_failed},
           {"counterexamples", ce}};
  if (d.generation_failed) out["failure"] = d.failure;
  return out;
}

Json to_json(const MacReport& r) {
  Json fwd = to_json(r.forward);
  fwd["bound_H_over_h"] = r.forward_bound_H;
  fwd["bound_R_over_h"] = r.forward_bound_R;
  fwd["max_R_over_h"] = r.max_R_forward;
  Json rev = to_json(r.reverse);
  rev["bound_R_over_h"] = r.reverse_bound_R;
  rev["converse_gamma"] = number(r.converse_gamma);
  return {{"constants", to_json(r.constants)},
          {"forward", fwd},
          {"reverse", rev},
          {"passed", r.passed()}};
}

Json to_json(const ConvergenceResult& r) {
  Json levels = Json::array();
  for (const auto& l : r.levels)
    levels.push_back({{"level", l.level},
                      {"h_T", l.h_T},
                      {"error", number(l.error)},
                      {"seminorm_hi", number(l.seminorm_hi)},
                      {"normalized", number(l.normalized)},
                      {"order", number(l.order)}});
  return {{"k", r.k},
          {"m", r.m},
          {"p", std::isinf(r.p) ? Json("inf") : Json(r.p)},
          {"expected_order", r.expected_order},
          {"final_order", r.final_order},
          {"exact", r.exact},
          {"levels", levels}};
}

Json make_report(const std::string& command, const Json& config, const Json& results,
                 const Json& warnings, std::uint64_t seed) {
  return {{"schema_version", kSchemaVersion},
          {"version", kVersion},
          {"command", command},
          {"seed", seed},
          {"config", config},
          {"results", results},
          {"warnings", warnings}};
}

std::string sweep_csv(const SweepResult& s) {
  std::string out = kSweepCsvHeader;
  for (const auto& r : s.rows) {
    std::string field = r.argmax_field;
    if (field.find_first_of(",\"") != std::string::npos) {
      std::string quoted = "\"";
      for (char c : field) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
      field = quoted + "\"";
    }
    out += std::to_string(r.level) + "," + format_number(r.alpha[0]) + "," +
           format_number(r.alpha[1]) + "," + format_number(r.alpha[2]) + "," +
           format_number(r.R_T) + "," + format_number(r.h_T) + "," + format_number(r.max_ratio) +
           "," + format_number(r.max_squeeze) + "," + field + "," + std::to_string(r.indeterminate) +
           "," + (r.refinement_warning ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace anisotetra
