// fanih: command-line front end.
//
//   fanih ih FAN.json
//   fanih local-h SUBDIVISION.json
//   fanih decompose SUBDIVISION.json [--tau rays]
//   fanih subdivide star FAN.json --cone rays [--ray v]
//   fanih subdivide barycentric FAN.json
//   fanih complete-fan FAN.json --ray v
//   fanih verify {hl|hr|rhl|rhr|convex|complete|deform} ...
//
// Exit codes: 0 pass, 1 check failed, 2 bad input, 3 internal tripwire,
// 4 hypothesis not certified.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "fanih/combinatorics.hpp"
#include "fanih/io.hpp"

using namespace fanih;

namespace {

enum Exit { kPass = 0, kFail = 1, kInput = 2, kInternal = 3, kHypothesis = 4 };

struct Options {
  std::string format = "text";
  int cap = -1;
  std::string eps;
  std::string refinement;
  std::string report;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

Vec parse_vec(const std::string& s) {
  Vec v;
  for (const auto& t : split(s, ',')) v.push_back(parse_rational(t));
  return v;
}

// "0,2" -> the cone spanned by rays 0 and 2; "" -> the origin cone
int parse_cone(const Fan& f, const std::string& s) {
  std::vector<int> rs;
  for (const auto& t : split(s, ',')) {
    try {
      rs.push_back(std::stoi(t));
    } catch (const std::exception&) {
      fail(ErrorKind::InvalidInput, "bad ray index '" + t + "'");
    }
  }
  int c = f.find_cone(rs);
  require(c >= 0, ErrorKind::NotAFace, "no cone with rays {" + s + "}");
  return c;
}

// Function argument: inline JSON or a path to a JSON file.
json json_arg(const std::string& s) {
  if (!s.empty() && (s[0] == '{' || s[0] == '[')) return parse_json_text(s);
  return load_json(s);
}

std::string rays_label(const Fan& f, int c) {
  std::string s;
  for (int r : f.cone(c).rays) s += (s.empty() ? "" : ",") + std::to_string(r);
  return "{" + s + "}";
}

json cone_index(const Fan& f, const MultiplicityTable& T) {
  json j = json::object();
  for (const auto& [c, g] : T.dims) j[std::to_string(c)] = f.cone(c).rays;
  return j;
}

void write_report(const Options& o, const json& j) {
  if (o.report.empty()) return;
  std::ofstream out(o.report);
  require(bool(out), ErrorKind::InvalidInput, "cannot write " + o.report);
  out << dump(j);
}

std::unique_ptr<SubdivisionMap> load_refinement(const Options& o, const FanPtr& fan) {
  if (o.refinement.empty()) return nullptr;
  SubdivisionMap r = subdivision_from_json(load_json(o.refinement));
  require(r.source->simplicial(), ErrorKind::RefinementNotSimplicial, "refinement is not simplicial");
  // re-anchor onto the fan object in use
  r = make_subdivision(r.source, fan);
  return std::make_unique<SubdivisionMap>(r);
}

// ------------------------------------------------------------------- ih

int cmd_ih(const Options& o, const std::string& path) {
  FanPtr fan = fan_from_json(load_json(path));
  if (!fan->pointed()) fan = pointed_reduction(fan).fan;
  auto ref = load_refinement(o, fan);
  FanIH F(fan, ref.get(), RefinementKind::Minimal, o.cap);
  GradedDims ih = F.dims();
  if (o.format == "json") {
    json j{{"support", support_name(F.support())}, {"ih", dims_to_json(ih)}};
    if (!F.complete()) j["ih_relative"] = dims_to_json(F.dims_rel());
    std::cout << dump(j);
  } else if (o.format == "tsv") {
    std::cout << "degree\tdim\n";
    for (auto [d, n] : ih) std::cout << d << "\t" << n << "\n";
  } else {
    std::cout << format_dims(ih) << "\n";
  }
  return kPass;
}

// --------------------------------------------------------- decomposition

void print_table(const Options& o, const Fan& target, const MultiplicityTable& T, json extra) {
  auto perv = perverse_table(T, target);
  if (o.format == "json") {
    extra["w_table"] = w_table_to_json(T);
    extra["cones"] = cone_index(target, T);
    extra["perverse"] = perverse_to_json(perv);
    std::cout << dump(extra);
  } else if (o.format == "tsv") {
    std::cout << "cone\trays\tdegree\tdim\n";
    for (const auto& [c, g] : T.dims)
      for (auto [d, n] : g) std::cout << c << "\t" << rays_label(target, c) << "\t" << d << "\t" << n << "\n";
    std::cout << "perverse\tdim\n";
    for (auto [p, n] : perv) std::cout << p << "\t" << n << "\n";
  } else {
    for (const auto& [c, g] : T.dims) std::cout << "W" << rays_label(target, c) << " " << format_dims(g) << "\n";
    std::cout << "perverse";
    for (auto [p, n] : perv) std::cout << " " << p << ":" << n;
    std::cout << "\n";
    for (auto it = extra.begin(); it != extra.end(); ++it) std::cout << it.key() << " " << it.value().dump() << "\n";
  }
}

int cmd_local_h(const Options& o, const std::string& path) {
  SubdivisionMap pi = subdivision_from_json(load_json(path));
  int cap = o.cap >= 0 ? o.cap : default_cap(*pi.source);
  auto G = std::make_shared<const SheafModel>(minimal_extension_sheaf(pi.source, 0, cap));
  Pushforward P = pushforward(pi, G, cap);
  MultiplicityTable T = decompose(*P.F);
  check_sum_rule(*P.F, T);
  // oracle tripwire on every simplicial target cone
  int checked = 0;
  if (pi.source->simplicial() && pi.source->pointed()) {
    for (int s = 0; s < pi.target->num_cones(); ++s) {
      if (!pi.target->simplicial(s)) continue;
      GradedDims expect = local_h_dims(stanley_local_h(pi, s));
      require(expect == T.at(s), ErrorKind::OracleMismatch,
              "W" + rays_label(*pi.target, s) + " = " + format_dims(T.at(s)) + " but the alternating sum gives " +
                  format_dims(expect));
      ++checked;
    }
  }
  Smallness sm = pi.source->simplicial() ? detect_semismall(pi) : Smallness{false, false};
  json extra{{"oracle_checked_cones", checked}, {"semismall", sm.semismall}};
  print_table(o, *pi.target, T, extra);
  return kPass;
}

int cmd_decompose(const Options& o, const std::string& path, const std::string& tau_s) {
  SubdivisionMap pi = subdivision_from_json(load_json(path));
  int tau = parse_cone(*pi.source, tau_s);
  int cap = o.cap >= 0 ? o.cap : default_cap(*pi.source);
  auto G = std::make_shared<const SheafModel>(minimal_extension_sheaf(pi.source, tau, cap));
  Pushforward P = pushforward(pi, G, cap);
  MultiplicityTable T = decompose(*P.F, pi.source->cone(tau).dim);
  check_sum_rule(*P.F, T);
  json extra{{"tau", pi.source->cone(tau).rays}, {"stalks", sheaf_to_json(*P.F)}};
  if (o.format == "text") extra.erase("stalks");
  print_table(o, *pi.target, T, extra);
  return kPass;
}

// ------------------------------------------------------------ constructions

int cmd_subdivide_star(const Options&, const std::string& path, const std::string& cone, const std::string& ray) {
  FanPtr fan = fan_from_json(load_json(path));
  int sigma = parse_cone(*fan, cone);
  Vec v = ray.empty() ? fan->barycenter(sigma) : parse_vec(ray);
  require(int(v.size()) == fan->ambient_dim(), ErrorKind::DimensionMismatch, "ray has wrong width");
  std::cout << dump(subdivision_to_json(star_subdivision(fan, sigma, v)));
  return kPass;
}

int cmd_subdivide_barycentric(const Options&, const std::string& path) {
  FanPtr fan = fan_from_json(load_json(path));
  std::cout << dump(subdivision_to_json(barycentric_subdivision(fan).map));
  return kPass;
}

int cmd_complete_fan(const Options&, const std::string& path, const std::string& ray) {
  FanPtr fan = fan_from_json(load_json(path));
  Vec rho = parse_vec(ray);
  require(int(rho.size()) == fan->ambient_dim(), ErrorKind::DimensionMismatch, "ray has wrong width");
  std::cout << dump(fan_to_json(complete_convex_fan(fan, rho)));
  return kPass;
}

// ------------------------------------------------------------------ verify

struct VerifyArgs {
  std::string kind, fan, subdivision, l, lhat, tau;
};

void print_checks(const Options& o, const json& j) {
  if (o.format == "json") {
    std::cout << dump(j);
    return;
  }
  const bool tsv = o.format == "tsv";
  if (tsv) std::cout << "check\tname\tdegree\trank\trequired\tinertia\texpected\tok\n";
  if (j.contains("w_table") && !tsv)
    for (auto it = j["w_table"].begin(); it != j["w_table"].end(); ++it)
      std::cout << "W " << it.key() << " " << it.value().dump() << "\n";
  if (j.contains("checks"))
    for (const auto& c : j["checks"]) {
      if (!tsv) std::cout << c["check"].get<std::string>() << " " << c["name"].get<std::string>() << " "
                          << (c["pass"].get<bool>() ? "pass" : "FAIL") << "\n";
      for (const auto& r : c["table"]) {
        std::string in = r.contains("inertia") ? r["inertia"].dump() : "-";
        std::string ex = r.contains("expected") ? r["expected"].dump() : "-";
        if (tsv)
          std::cout << c["check"].get<std::string>() << "\t" << c["name"].get<std::string>() << "\t" << r["degree"]
                    << "\t" << r["rank"] << "\t" << r["required"] << "\t" << in << "\t" << ex << "\t"
                    << (r["ok"].get<bool>() ? 1 : 0) << "\n";
        else
          std::cout << "  d=" << r["degree"] << " rank=" << r["rank"] << " required=" << r["required"]
                    << (in != "-" ? " inertia=" + in + " expected=" + ex +
                                        " signed_primitive=" + r["inertia_primitive"].dump()
                                  : "")
                    << (r["ok"].get<bool>() ? "" : " FAIL")
                    << "\n";
      }
    }
  if (j.contains("steps"))
    for (const auto& s : j["steps"])
      std::cout << (tsv ? "deform\teps\t" : "eps ") << s["eps"].get<std::string>() << (tsv ? "\t" : " ")
                << (s["pass"].get<bool>() ? "pass" : "fail") << "\n";
  if (j.contains("notes"))
    for (const auto& n : j["notes"]) std::cout << (tsv ? "note\t" : "note: ") << n.get<std::string>() << "\n";
  std::cout << (tsv ? "pass\t" : "result ") << (j["pass"].get<bool>() ? "pass" : "fail") << "\n";
}

int cmd_verify(const Options& o, const VerifyArgs& a) {
  json out;
  const std::string& k = a.kind;
  if (k == "hl" || k == "hr" || k == "convex" || k == "complete") {
    require(!a.fan.empty(), ErrorKind::InvalidInput, "--fan is required");
    FanPtr fan = fan_from_json(load_json(a.fan));
    auto ref = load_refinement(o, fan);
    VerifyResult r;
    if (k == "hl" || k == "hr") {
      require(!a.l.empty(), ErrorKind::InvalidInput, "--l is required");
      PiecewiseLinear l = function_from_json(fan, json_arg(a.l));
      r = verify_hl_hr(l, parse_cone(*fan, a.tau), k == "hr", ref.get());
    } else if (k == "convex") {
      require(!a.lhat.empty(), ErrorKind::InvalidInput, "--lhat is required");
      r = verify_convex(function_from_json(fan, json_arg(a.lhat)), ref.get());
    } else {
      require(!a.l.empty() && !a.lhat.empty(), ErrorKind::InvalidInput, "--l and --lhat are required");
      r = verify_complete(function_from_json(fan, json_arg(a.l)), function_from_json(fan, json_arg(a.lhat)),
                          ref.get());
    }
    out = result_to_json(r);
  } else if (k == "rhl" || k == "rhr" || k == "deform") {
    require(!a.subdivision.empty(), ErrorKind::InvalidInput, "--subdivision is required");
    require(!a.lhat.empty(), ErrorKind::InvalidInput, "--lhat is required");
    SubdivisionMap pi = subdivision_from_json(load_json(a.subdivision));
    int tau = parse_cone(*pi.source, a.tau);
    PiecewiseLinear lhat = function_from_json(pi.source, json_arg(a.lhat));
    if (k == "deform") {
      require(!a.l.empty(), ErrorKind::InvalidInput, "--l is required");
      PiecewiseLinear l = function_from_json(pi.target, json_arg(a.l));
      std::vector<Rational> eps = default_eps_schedule();
      if (!o.eps.empty()) eps = parse_vec(o.eps);
      for (const auto& e : eps) require(e > 0, ErrorKind::InvalidInput, "eps must be positive");
      out = result_to_json(verify_deformation(pi, tau, l, lhat, eps));
    } else {
      out = result_to_json(verify_relative(pi, tau, lhat, k == "rhr"));
    }
  } else {
    fail(ErrorKind::InvalidInput, "unknown check '" + k + "'");
  }
  out["kind"] = k;
  write_report(o, out);
  print_checks(o, out);
  return out["pass"].get<bool>() ? kPass : kFail;
}

int exit_for(const Error& e) {
  switch (error_category(e.kind())) {
    case ErrorCategory::Input: return kInput;
    case ErrorCategory::Hypothesis: return kHypothesis;
    case ErrorCategory::Internal: return kInternal;
  }
  return kInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Combinatorial intersection cohomology of fans"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--format", o.format, "text, json or tsv")
      ->check(CLI::IsMember({"text", "json", "tsv"}))
      ->capture_default_str();
  app.add_option("--cap", o.cap, "degree cap for sheaf computations");
  app.add_option("--eps", o.eps, "comma separated eps schedule for verify deform");
  app.add_option("--refinement", o.refinement, "simplicial refinement used by the pairing");
  app.add_option("--report", o.report, "write the verify report JSON here");

  std::string path, tau, cone, ray;
  auto* ih = app.add_subcommand("ih", "intersection cohomology Betti numbers");
  ih->add_option("fan", path)->required();

  auto* lh = app.add_subcommand("local-h", "local h table of a subdivision");
  lh->add_option("subdivision", path)->required();

  auto* dec = app.add_subcommand("decompose", "decomposition of the pushforward of L^tau");
  dec->add_option("subdivision", path)->required();
  dec->add_option("--tau", tau, "source cone as ray indices, e.g. 0,2");

  auto* sub = app.add_subcommand("subdivide", "star or barycentric subdivision");
  sub->require_subcommand(1);
  auto* star = sub->add_subcommand("star", "star subdivision of one cone");
  star->add_option("fan", path)->required();
  star->add_option("--cone", cone, "cone as ray indices")->required();
  star->add_option("--ray", ray, "new ray, comma separated rationals (default: barycenter)");
  auto* bary = sub->add_subcommand("barycentric", "barycentric subdivision");
  bary->add_option("fan", path)->required();

  auto* comp = app.add_subcommand("complete-fan", "cone the boundary of a convex fan from a ray");
  comp->add_option("fan", path)->required();
  comp->add_option("--ray", ray, "ray rho with -rho interior to the support")->required();

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "run a Lefschetz-type check");
  ver->add_option("kind", va.kind)
      ->required()
      ->check(CLI::IsMember({"hl", "hr", "rhl", "rhr", "convex", "complete", "deform"}));
  ver->add_option("--fan", va.fan);
  ver->add_option("--subdivision", va.subdivision);
  ver->add_option("--l", va.l, "function file or inline JSON");
  ver->add_option("--lhat", va.lhat, "function file or inline JSON");
  ver->add_option("--tau", va.tau, "cone as ray indices");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    if (*ih) return cmd_ih(o, path);
    if (*lh) return cmd_local_h(o, path);
    if (*dec) return cmd_decompose(o, path, tau);
    if (*star) return cmd_subdivide_star(o, path, cone, ray);
    if (*bary) return cmd_subdivide_barycentric(o, path);
    if (*comp) return cmd_complete_fan(o, path, ray);
    if (*ver) return cmd_verify(o, va);
  } catch (const Error& e) {
    std::cerr << "fanih: " << e.what() << "\n";
    return exit_for(e);
  } catch (const std::exception& e) {
    std::cerr << "fanih: internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
