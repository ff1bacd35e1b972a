#include "commands.hpp"

#include "disc_pipeline.hpp"
#include "field_system.hpp"
#include "majorization.hpp"
#include "saddle_pl.hpp"
#include "svg.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>

namespace catmin {

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"metrics",      "minimize-graph", "build-disc", "check-cat0",
                                              "key-lemma",    "check-saddle",   "counterexample",
                                              "solve-fields", "perturb",        "validate"};
  return names;
}

std::string resolve_input_path(const std::string& path) {
  namespace fs = std::filesystem;
  if (fs::exists(path) || fs::path(path).is_absolute()) return path;
  if (const char* dir = std::getenv("CATMIN_FIXTURES")) {
    const fs::path alt = fs::path(dir) / path;
    if (fs::exists(alt)) return alt.string();
  }
  return path;
}

OrderingChain ordering_chain(const PseudometricMatrix& length, const PseudometricMatrix& intrinsic,
                             const PseudometricMatrix& connecting, double slack) {
  OrderingChain c;
  auto gap = [](double lo, double hi) {
    // How far `lo` exceeds `hi`; equal infinities count as agreement.
    if (lo == hi) return 0.0;
    return lo - hi;
  };
  for (std::size_t i = 0; i < length.size(); ++i)
    for (std::size_t j = 0; j < length.size(); ++j) {
      c.worst_length_vs_intrinsic = std::max(c.worst_length_vs_intrinsic, gap(intrinsic(i, j), length(i, j)));
      c.worst_intrinsic_vs_connecting =
          std::max(c.worst_intrinsic_vs_connecting, gap(connecting(i, j), intrinsic(i, j)));
    }
  c.pass = c.worst_length_vs_intrinsic <= slack && c.worst_intrinsic_vs_connecting <= slack;
  return c;
}

namespace {

Json matrix_json(const std::vector<std::vector<double>>& m) {
  Json a = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (double x : row) r.push_back(number(x));
    a.push_back(r);
  }
  return a;
}

Json certificate_json(const MinimizationCertificate& c) {
  Json j{{"iterations", c.iterations},
         {"converged", c.converged},
         {"worst_t_star", c.worst_t_star},
         {"worst_residual", c.worst_residual},
         {"worst_angle_deficit", c.worst_angle_deficit},
         {"valid", c.valid},
         {"log", c.log}};
  j["free_vertices"] = Json::array();
  for (const auto& v : c.free_vertices)
    j["free_vertices"].push_back(
        {{"vertex", v.vertex}, {"t_star", v.t_star}, {"angle_sum", v.angle_sum}, {"degenerate", v.degenerate}});
  return j;
}

Json cat0_json(const Cat0Report& r) {
  Json j{{"worst_deficit", r.worst_deficit},
         {"simply_connected", r.simply_connected},
         {"problems", r.problems},
         {"pass", r.pass}};
  j["interior_angles"] = Json::array();
  for (const auto& [v, a] : r.interior_angles) j["interior_angles"].push_back({{"vertex", v}, {"angle_sum", a}});
  j["merged"] = r.merged;
  return j;
}

Json area_json(const BoundaryArea& a) {
  return {{"length", a.length}, {"area", a.area}, {"isoperimetric", a.isoperimetric}};
}

Json thin_json(const ThinTriangleReport& t) {
  return {{"samples", t.samples},
          {"worst_excess", number(t.worst_excess)},
          {"worst_margin", number(t.worst_margin)},
          {"allowance_at_worst", t.allowance_at_worst},
          {"worst_triangle", t.worst_triangle},
          {"violation", t.violation}};
}

Json net_json(const EpsilonNet& n) {
  return {{"epsilon", n.epsilon},
          {"boundary_points", n.boundary_points},
          {"interior_nodes", n.interior_nodes.size()},
          {"size", n.size},
          {"bound", n.bound},
          {"covering_radius", n.covering_radius},
          {"within_bound", n.size <= n.bound}};
}

Json params_json(const HexagonParams& p) {
  return {{"radius", p.radius}, {"rho", p.rho}, {"phi", p.phi}, {"zeta", p.zeta}, {"tau", p.tau}};
}

Json shortening_json(const ShorteningReport& r) {
  return {{"epsilon", r.epsilon},
          {"max_increase", r.max_increase},
          {"max_decrease", r.max_decrease},
          {"boundary_unchanged", r.boundary_unchanged},
          {"pareto", r.pareto},
          {"refined_max_increase", r.refined_max_increase},
          {"before", to_json(r.before)},
          {"after", to_json(r.after)}};
}

Json saddle_json(const SaddleVerdict& v) {
  Json j{{"saddle", v.saddle}, {"planes_tested", v.planes_tested}};
  if (v.witness) {
    j["witness"] = {{"normal", to_json(v.witness->normal)},
                    {"offset", v.witness->offset},
                    {"side", v.side},
                    {"zero_rule", v.zero_rule},
                    {"component", v.component}};
  }
  return j;
}

Tolerances tolerances(const Instance& inst, const CommandOptions& opt) {
  Tolerances t = inst.tol;
  if (opt.tol_zero) t.zero = *opt.tol_zero;
  if (opt.tol_descent) t.descent = *opt.tol_descent;
  if (opt.tol_angle) t.angle = *opt.tol_angle;
  if (opt.tol_geodesic) t.geodesic = *opt.tol_geodesic;
  return t;
}

Instance need(const std::optional<Json>& instance, const char* payload) {
  if (!instance) fail_input(std::string("an input instance with a ") + payload + " payload is required (--in)");
  Instance inst = parse_instance(*instance);
  const bool has = (std::string(payload) == "mapped_disc" && inst.disc) ||
                   (std::string(payload) == "graph" && inst.graph) ||
                   (std::string(payload) == "patch" && inst.patch) ||
                   (std::string(payload) == "polyhedral_disc" && inst.polyhedral);
  if (!has) fail_input(std::string("expected a ") + payload + " payload");
  return inst;
}

struct Outcome {
  bool pass = false;
  Json report;
  std::string svg;
};

Outcome cmd_metrics(const Instance& inst, const CommandOptions& opt) {
  const MappedDisc& m = *inst.disc;
  const Tolerances tol = tolerances(inst, opt);
  if (opt.refine < 1) fail_input("--refine must be a positive integer");
  const auto length = length_pseudometric(m, opt.refine);
  const auto conn = connecting_pseudometric(m, tol.zero);
  const auto intr = intrinsic_pseudometric(m, tol.zero, opt.refine);
  const auto chain = ordering_chain(length, intr, conn.exact ? conn.value : conn.lower, 1e-9 + tol.zero);
  const auto quotient = metric_quotient(intr, tol.zero);
  const auto ml = monotone_light_report(m, tol.zero);
  Outcome o;
  bool metrics_ok = true;
  for (const auto* p : {&length, &intr, &conn.value}) metrics_ok = metrics_ok && verify_pseudometric(*p, 1e-9 + tol.zero).ok;
  o.pass = chain.pass && metrics_ok;
  o.report["refinement"] = opt.refine;
  o.report["length"] = to_json(length);
  o.report["intrinsic"] = to_json(intr);
  o.report["connecting"] = {{"value", to_json(conn.value)}, {"lower", to_json(conn.lower)}, {"exact", conn.exact}};
  o.report["ordering_chain"] = {{"worst_length_vs_intrinsic", chain.worst_length_vs_intrinsic},
                                {"worst_intrinsic_vs_connecting", chain.worst_intrinsic_vs_connecting},
                                {"status", chain.pass ? "PASS" : "FAIL"}};
  o.report["pseudometric_axioms"] = metrics_ok;
  o.report["quotient"] = {{"classes", quotient.representatives.size()}, {"class_of", quotient.class_of}};
  o.report["monotone"] = ml.monotone;
  o.report["light"] = ml.light;
  if (opt.svg) o.svg = svg_parameter_domain(m);
  return o;
}

Outcome cmd_minimize_graph(const Instance& inst, const CommandOptions& opt) {
  const auto r = relax(*inst.graph, tolerances(inst, opt));
  Outcome o;
  o.pass = r.certificate.valid;
  o.report["certificate"] = certificate_json(r.certificate);
  o.report["graph"] = to_json(r.graph);
  o.report["total_length"] = {{"initial", r.total_length.front()}, {"final", r.total_length.back()}};
  return o;
}

Outcome cmd_build_disc(const Instance& inst, const CommandOptions& opt) {
  const auto tol = tolerances(inst, opt);
  const auto d = glue_disc(*inst.graph, tol);
  const auto cat0 = cat0_certificate(d.w, tol);
  const auto area = boundary_and_area(d.w);
  Outcome o;
  o.pass = d.witness_ok && cat0.pass && area.isoperimetric;
  o.report["instance"] = {{"version", kFormatVersion}, {"target", {{"kind", "polyhedral"}}},
                          {"polyhedral_disc", to_json(d.w)}};
  o.report["witness_ok"] = d.witness_ok;
  o.report["max_gluing_mismatch"] = d.max_gluing_mismatch;
  o.report["bare_edges"] = d.bare_edges;
  o.report["cat0"] = cat0_json(cat0);
  o.report["area"] = area_json(area);
  if (opt.svg) o.svg = svg_disc_layout(d.w);
  return o;
}

Outcome cmd_check_cat0(const Instance& inst, const CommandOptions& opt) {
  const auto tol = tolerances(inst, opt);
  const PolyhedralDisc& w = *inst.polyhedral;
  const auto cat0 = cat0_certificate(w, tol);
  Outcome o;
  o.report["cat0"] = cat0_json(cat0);
  o.report["area"] = area_json(boundary_and_area(w));
  const auto cuts = cut_vertices(w);
  o.report["cut_vertices"] = cuts.cut_vertices;
  o.report["blocks"] = cuts.blocks;
  bool thin_ok = true;
  if (cat0.simply_connected && !w.edges.empty()) {
    const PolyhedralTarget target(w, 32);
    const auto thin = thin_triangle_test(target, opt.samples > 0 ? opt.samples : 2000, opt.seed);
    o.report["thin_triangles"] = thin_json(thin);
    thin_ok = !thin.violation;
    const double L = boundary_and_area(w).length;
    if (L > 0.0) {
      o.report["nets"] = Json::array();
      for (double k : {10.0, 20.0}) o.report["nets"].push_back(net_json(epsilon_net(target, L / k)));
    }
  }
  o.pass = cat0.pass && thin_ok;
  if (opt.svg) o.svg = svg_disc_layout(w);
  return o;
}

Outcome cmd_key_lemma(const Instance& inst, const CommandOptions& opt) {
  const MappedDisc& m = *inst.disc;
  std::vector<int> F = inst.F.empty() ? m.boundary_loop : inst.F;
  KeyLemmaOptions k;
  k.seed = opt.seed;
  k.tol = tolerances(inst, opt);
  if (opt.samples > 0) k.q_samples = opt.samples;
  const auto r = run_key_lemma(m, F, k);
  Outcome o;
  o.pass = r.pass;
  Json& j = o.report;
  j["F"] = r.F;
  j["one_point"] = r.one_point;
  j["gamma"] = to_json(r.gamma.graph);
  j["certificate"] = certificate_json(r.certificate);
  j["instance"] = {{"version", kFormatVersion}, {"target", {{"kind", "polyhedral"}}},
                   {"polyhedral_disc", to_json(r.disc.w)}};
  j["p"] = r.p;
  j["w_distance"] = matrix_json(r.w_distance);
  j["worst_contraction"] = r.worst_contraction;
  j["worst_boundary_gap"] = r.worst_boundary_gap;
  j["q_samples"] = r.q_sample_count;
  j["worst_q_excess"] = r.worst_q_excess;
  j["q_violations"] = r.q_violations.size();
  j["cat0"] = cat0_json(r.cat0);
  j["area"] = area_json(r.area);
  j["log"] = r.log;
  if (opt.svg) o.svg = svg_parameter_domain(m, &r.gamma.graph);
  return o;
}

Outcome cmd_check_saddle(const Instance& inst, const CommandOptions& opt) {
  const auto v = is_saddle_pl(*inst.disc, opt.samples > 0 ? opt.samples : 200, opt.seed);
  Outcome o;
  o.pass = v.saddle;
  o.report["verdict"] = saddle_json(v);
  if (opt.svg) o.svg = svg_parameter_domain(*inst.disc);
  return o;
}

Outcome cmd_counterexample(const CommandOptions& opt) {
  const int planes = opt.samples > 0 ? opt.samples : 200;
  const auto search = search_hexagon_parameters(planes, opt.seed);
  const MappedDisc m = hexagon_counterexample(search.params);
  const auto verdict = is_saddle_pl(m, planes, opt.seed);
  const auto s = shorten_by_rotation(m, search.epsilon);
  Outcome o;
  o.pass = verdict.saddle && s.pareto && s.max_decrease >= 1e-4 && s.boundary_unchanged;
  // The report doubles as an instance file.
  o.report["version"] = kFormatVersion;
  o.report["target"] = {{"kind", "euclidean"}, {"dimension", 3}};
  o.report["mapped_disc"] = to_json(m);
  o.report["counterexample"] = {{"params", params_json(search.params)},
                                {"epsilon", search.epsilon},
                                {"rotation_range", rotation_range(m)},
                                {"candidates", search.candidates},
                                {"feasible", search.feasible},
                                {"saddle", saddle_json(verdict)},
                                {"shortening", shortening_json(s)}};
  if (opt.svg) o.svg = svg_parameter_domain(m);
  return o;
}

double fields_residual(const HeightFieldPatch& p, FieldSolution& sol) {
  sol = solve_field_system(p);
  return max_interior_norm(p, laplacian(p, sol.fields));
}

Outcome cmd_solve_fields(const std::optional<Json>& instance) {
  Outcome o;
  if (instance) {
    const Instance inst = need(instance, "patch");
    FieldSolution sol;
    const double res = fields_residual(*inst.patch, sol);
    o.pass = sol.min_lambda > 0.0;
    o.report["laplacian_residual"] = res;
    o.report["min_lambda"] = sol.min_lambda;
    o.report["max_tangency_residual"] = sol.max_tangency_residual;
    o.report["energy"] = energy(*inst.patch, sol.fields);
    return o;
  }
  // Convergence study on the hyperbolic paraboloid.
  Json runs = Json::array();
  std::vector<double> res;
  double min_lambda = kInf;
  for (int n : {16, 32, 64}) {
    const auto p = hyperbolic_paraboloid_patch(0.5, 1.0 / n);
    FieldSolution sol;
    res.push_back(fields_residual(p, sol));
    min_lambda = std::min(min_lambda, sol.min_lambda);
    runs.push_back({{"h", 1.0 / n}, {"laplacian_residual", res.back()}, {"min_lambda", sol.min_lambda},
                    {"max_tangency_residual", sol.max_tangency_residual}});
  }
  Json orders = Json::array();
  bool ok = min_lambda > 0.0;
  for (std::size_t k = 0; k + 1 < res.size(); ++k) {
    const double q = std::log2(res[k] / res[k + 1]);
    orders.push_back(q);
    ok = ok && q >= 1.5 && q <= 2.5 && res[k + 1] < res[k];
  }
  o.pass = ok;
  o.report["patch"] = "hyperbolic paraboloid z = x^2 - y^2, asymptotic coordinates on [-0.5, 0.5]^2";
  o.report["runs"] = runs;
  o.report["observed_orders"] = orders;
  o.report["min_lambda"] = min_lambda;
  return o;
}

Outcome cmd_perturb(const std::optional<Json>& instance, const CommandOptions& opt) {
  const HeightFieldPatch p = instance ? *need(instance, "patch").patch : hyperbolic_paraboloid_patch(0.5, opt.h);
  const auto sol = solve_field_system(p);
  const auto r = perturbation_evidence(p, sol.fields, opt.trials, opt.seed, opt.amplitude);
  Outcome o;
  o.pass = r.no_decrease && r.convex;
  o.report["base_energy"] = r.base_energy;
  o.report["trials"] = r.trials.size();
  o.report["amplitude"] = opt.amplitude;
  o.report["min_delta"] = r.min_delta;
  o.report["min_convexity_gap"] = r.min_convexity_gap;
  o.report["no_decrease"] = r.no_decrease;
  o.report["convex"] = r.convex;
  return o;
}

}  // namespace

CommandResult run_command(const std::string& name, const std::optional<Json>& instance, const CommandOptions& opt) {
  CommandResult res;
  res.report["command"] = name;
  try {
    Outcome o;
    if (name == "validate") {
      if (!instance) fail_input("validate requires an input instance (--in)");
      const auto diags = validate_instance(*instance);
      o.pass = diags.empty();
      o.report["diagnostics"] = diags;
      if (!o.pass) {
        res.exit_code = 2;
        res.report.update(o.report);
        res.report["status"] = "invalid";
        return res;
      }
    } else if (name == "metrics") {
      o = cmd_metrics(need(instance, "mapped_disc"), opt);
    } else if (name == "minimize-graph") {
      o = cmd_minimize_graph(need(instance, "graph"), opt);
    } else if (name == "build-disc") {
      o = cmd_build_disc(need(instance, "graph"), opt);
    } else if (name == "check-cat0") {
      o = cmd_check_cat0(need(instance, "polyhedral_disc"), opt);
    } else if (name == "key-lemma") {
      o = cmd_key_lemma(need(instance, "mapped_disc"), opt);
    } else if (name == "check-saddle") {
      o = cmd_check_saddle(need(instance, "mapped_disc"), opt);
    } else if (name == "counterexample") {
      o = cmd_counterexample(opt);
    } else if (name == "solve-fields") {
      o = cmd_solve_fields(instance);
    } else if (name == "perturb") {
      o = cmd_perturb(instance, opt);
    } else {
      fail_input("unknown command '" + name + "'");
    }
    res.report.update(o.report);
    res.report["status"] = o.pass ? "PASS" : "FAIL";
    res.exit_code = o.pass ? 0 : 1;
    res.svg = std::move(o.svg);
  } catch (const Error& e) {
    res.report["status"] = "error";
    res.report["error"] = {{"message", e.what()},
                           {"kind", e.kind() == ErrorKind::InvalidInput ? "invalid_input"
                                    : e.kind() == ErrorKind::Numerical ? "numerical"
                                                                       : "unsupported"}};
    if (e.kind() == ErrorKind::InvalidInput && instance) res.report["diagnostics"] = validate_instance(*instance);
    res.exit_code = e.kind() == ErrorKind::InvalidInput ? 2 : 1;
  } catch (const std::exception& e) {
    res.report["status"] = "error";
    res.report["error"] = {{"message", e.what()}, {"kind", "internal"}};
    res.exit_code = 1;
  }
  return res;
}

}  // namespace catmin
