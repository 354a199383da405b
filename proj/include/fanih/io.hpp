#pragma once

// JSON in/out for fans, subdivisions, functions, tables and reports.
// Rationals travel as "p/q" strings; integers are accepted on input too.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fanih/lefschetz.hpp"

namespace fanih {

using json = nlohmann::json;

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  require(bool(in), ErrorKind::InvalidInput, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidInput, path + ": " + e.what());
  }
}

inline json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidInput, e.what());
  }
}

inline Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  fail(ErrorKind::InvalidInput, "rationals must be strings \"p/q\" or integers");
}

inline Vec vec_from_json(const json& j) {
  require(j.is_array(), ErrorKind::InvalidInput, "expected an array");
  Vec v;
  for (const auto& x : j) v.push_back(rational_from_json(x));
  return v;
}

inline json vec_to_json(const Vec& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(format_rational(x));
  return a;
}

// ------------------------------------------------------------------- fans

inline FanPtr fan_from_json(const json& j) {
  require(j.is_object(), ErrorKind::InvalidInput, "fan must be an object");
  require(j.contains("dim") && j["dim"].is_number_integer(), ErrorKind::InvalidInput, "fan needs an integer dim");
  int n = j["dim"].get<int>();
  require(n >= 0, ErrorKind::InvalidInput, "negative dimension");
  std::vector<Vec> rays;
  if (j.contains("rays"))
    for (const auto& r : j["rays"]) rays.push_back(vec_from_json(r));
  std::vector<std::vector<int>> cones;
  require(j.contains("cones") && j["cones"].is_array(), ErrorKind::InvalidInput, "fan needs a cone list");
  for (const auto& c : j["cones"]) {
    require(c.is_array(), ErrorKind::InvalidInput, "cone must be a list of ray indices");
    std::vector<int> rs;
    for (const auto& x : c) {
      require(x.is_number_integer(), ErrorKind::InvalidInput, "ray index must be an integer");
      int r = x.get<int>();
      require(r >= 0 && r < int(rays.size()), ErrorKind::InvalidInput, "ray index out of range");
      rs.push_back(r);
    }
    cones.push_back(rs);
  }
  std::vector<Vec> lin;
  if (j.contains("lineality"))
    for (const auto& r : j["lineality"]) lin.push_back(vec_from_json(r));
  for (const auto& r : lin) require(int(r.size()) == n, ErrorKind::DimensionMismatch, "lineality row has wrong width");
  Matrix L = lin.empty() ? Matrix(0, n) : Matrix::from_rows(lin, n);
  return std::make_shared<const Fan>(build_fan(n, rays, cones, L));
}

inline json fan_to_json(const Fan& f) {
  json j;
  j["dim"] = f.ambient_dim();
  json lin = json::array();
  for (int i = 0; i < f.lineality_dim(); ++i) lin.push_back(vec_to_json(f.lineality().row(i)));
  j["lineality"] = lin;
  json rays = json::array();
  for (const auto& r : f.rays()) rays.push_back(vec_to_json(r));
  j["rays"] = rays;
  json cones = json::array();
  for (int m : f.input_order()) cones.push_back(f.cone(m).rays);
  j["cones"] = cones;
  return j;
}

inline SubdivisionMap subdivision_from_json(const json& j) {
  require(j.is_object() && j.contains("source") && j.contains("target"), ErrorKind::InvalidInput,
          "subdivision needs source and target");
  FanPtr s = fan_from_json(j["source"]);
  FanPtr t = fan_from_json(j["target"]);
  if (j.contains("assignment")) {
    std::vector<int> a;
    for (const auto& x : j["assignment"]) {
      require(x.is_number_integer(), ErrorKind::InvalidInput, "assignment entries are cone ids");
      a.push_back(x.get<int>());
    }
    require(int(a.size()) == s->num_cones(), ErrorKind::InvalidInput, "assignment has wrong length");
    return make_subdivision(s, t, &a);
  }
  return make_subdivision(s, t);
}

inline json subdivision_to_json(const SubdivisionMap& pi) {
  json j;
  j["source"] = fan_to_json(*pi.source);
  j["target"] = fan_to_json(*pi.target);
  j["assignment"] = pi.assignment;
  return j;
}

// {"forms": [one form per listed cone]} or {"ray_values": [...]} (simplicial
// fans only).  A bare array is read as forms.
inline PiecewiseLinear function_from_json(FanPtr fan, const json& j) {
  const json* forms = nullptr;
  if (j.is_array()) forms = &j;
  else if (j.is_object() && j.contains("forms")) forms = &j["forms"];
  if (forms) {
    const auto& order = fan->input_order();
    require(forms->size() == order.size(), ErrorKind::InvalidInput, "one linear form per listed cone");
    std::map<int, Vec> f;
    for (size_t i = 0; i < order.size(); ++i) {
      Vec u = vec_from_json((*forms)[i]);
      require(int(u.size()) == fan->ambient_dim(), ErrorKind::DimensionMismatch, "form has wrong width");
      auto it = f.find(order[i]);
      require(it == f.end() || it->second == u, ErrorKind::NotPiecewiseLinear, "conflicting forms on a cone");
      f[order[i]] = u;
    }
    return PiecewiseLinear(fan, f);
  }
  require(j.is_object() && j.contains("ray_values"), ErrorKind::InvalidInput,
          "function needs \"forms\" or \"ray_values\"");
  return PiecewiseLinear::from_ray_values(fan, vec_from_json(j["ray_values"]));
}

inline json function_to_json(const PiecewiseLinear& l) {
  json forms = json::array();
  for (int m : l.fan()->input_order()) forms.push_back(vec_to_json(l.forms().at(m)));
  return json{{"forms", forms}};
}

// ----------------------------------------------------------------- tables

inline json dims_to_json(const GradedDims& g) {
  json j = json::object();
  for (auto [d, n] : g)
    if (n) j[std::to_string(d)] = n;
  return j;
}

inline json w_table_to_json(const MultiplicityTable& T) {
  json j = json::object();
  for (const auto& [c, g] : T.dims) j[std::to_string(c)] = dims_to_json(g);
  return j;
}

inline json perverse_to_json(const std::map<int, int>& p) {
  json j = json::object();
  for (auto [k, n] : p) j[std::to_string(k)] = n;
  return j;
}

inline json sheaf_to_json(const SheafModel& F) {
  json j = json::object();
  for (int c = 0; c < F.fan()->num_cones(); ++c) {
    GradedDims g = F.generator_dims(c);
    if (!g.empty()) j[std::to_string(c)] = dims_to_json(g);
  }
  return j;
}

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) rows.push_back(vec_to_json(m.row(i)));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows}};
}

inline json graded_matrices_to_json(const std::map<int, Matrix>& ms) {
  json a = json::array();
  for (const auto& [d, m] : ms) {
    json e = matrix_to_json(m);
    e["degree"] = d;
    a.push_back(e);
  }
  return a;
}

// ---------------------------------------------------------------- reports

inline json inertia_to_json(const Inertia& i) { return json::array({i.positive, i.negative, i.zero}); }

inline json report_to_json(const LefschetzReport& r) {
  json rows = json::array();
  for (const auto& x : r.rows) {
    json e{{"degree", x.from}, {"target", x.to}, {"power", x.power},
           {"rank", x.rank},   {"required", x.required}, {"ok", x.ok}};
    if (!x.witness.empty()) {
      json w = json::array();
      for (const auto& v : x.witness) w.push_back(vec_to_json(v));
      e["witness"] = w;
    }
    rows.push_back(e);
  }
  json j{{"name", r.name}, {"check", "hl"}, {"hypotheses", r.hypotheses}, {"table", rows}, {"pass", r.pass}};
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

inline json report_to_json(const HodgeRiemannReport& r) {
  json rows = json::array();
  for (const auto& x : r.rows)
    rows.push_back(json{{"degree", x.degree},
                        {"power", x.power},
                        {"dim", x.dim},
                        {"rank", x.prim_dim},
                        {"required", x.prim_dim},
                        {"sign", x.sign},
                        {"inertia", inertia_to_json(x.full)},
                        {"inertia_primitive", inertia_to_json(x.prim)},
                        {"expected", inertia_to_json(x.expected)},
                        {"symmetric", x.symmetric},
                        {"ok", x.ok}});
  json j{{"name", r.name}, {"check", "hr"}, {"hypotheses", r.hypotheses}, {"table", rows}, {"pass", r.pass}};
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

inline json result_to_json(const VerifyResult& v) {
  json checks = json::array();
  for (const auto& r : v.hl) checks.push_back(report_to_json(r));
  for (const auto& r : v.hr) checks.push_back(report_to_json(r));
  json j{{"checks", checks}, {"pass", v.pass()}};
  if (!v.notes.empty()) j["notes"] = v.notes;
  return j;
}

inline json result_to_json(const RelativeResult& v) {
  json checks = json::array();
  for (const auto& [c, r] : v.hl) checks.push_back(report_to_json(r));
  for (const auto& [c, r] : v.hl_fibre) {
    json e = report_to_json(r);
    e["name"] = r.name + "/fibre";
    checks.push_back(e);
  }
  for (const auto& [c, r] : v.hr) checks.push_back(report_to_json(r));
  return json{{"w_table", w_table_to_json(v.table)}, {"checks", checks}, {"pass", v.pass()}};
}

inline json result_to_json(const DeformationResult& v) {
  json steps = json::array();
  for (const auto& s : v.steps)
    steps.push_back(json{{"eps", format_rational(s.eps)},
                         {"hl", s.hl},
                         {"hr", s.hr},
                         {"hl_image", s.hl_image},
                         {"hr_image", s.hr_image},
                         {"pass", s.pass()}});
  json j{{"steps", steps}, {"pass", v.pass()}};
  j["largest_passing_eps"] = v.largest_passing ? json(format_rational(*v.largest_passing)) : json(nullptr);
  return j;
}

// Stable text rendering: two-space indent, trailing newline.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace fanih
