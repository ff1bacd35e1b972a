// Command-line front end; talks to the library through the C interface only.
#include <catmin/catmin.h>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>

namespace {

bool write_file(const std::string& path, const char* text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << text;
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metric minimizing surfaces: pseudometrics, CAT(0) discs, saddle maps"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(catmin_version()));

  std::string in, out, svg;
  std::map<std::string, std::string> values;
  const std::map<std::string, std::string> option_help{
      {"seed", "random seed"},
      {"refine", "mesh refinement for length distances"},
      {"samples", "sample count (thin triangles, q pairs, extra planes)"},
      {"trials", "perturbation trials"},
      {"amplitude", "perturbation amplitude"},
      {"spacing", "grid spacing for the default patch"},
      {"tol-zero", "zero tolerance"},
      {"tol-descent", "descent tolerance"},
      {"tol-angle", "angle tolerance"},
      {"tol-geodesic", "geodesic residual tolerance"}};

  const char* commands[][2] = {
      {"metrics", "length, intrinsic and connecting pseudometrics of a mapped disc"},
      {"minimize-graph", "relax a graph in a Euclidean target and certify it"},
      {"build-disc", "glue the disc W over a plane graph"},
      {"check-cat0", "angle-sum and thin-triangle certificates of a polyhedral disc"},
      {"key-lemma", "run the full disc construction on a mapped disc and sample set"},
      {"check-saddle", "plane-section saddle test of a map into 3-space"},
      {"counterexample", "search and emit the ten-triangle saddle disc"},
      {"solve-fields", "solve the four-field system (convergence study without --in)"},
      {"perturb", "random boundary-fixed perturbations of the energy"},
      {"validate", "schema and invariant diagnostics of an instance"}};
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c[0], c[1]);
    sub->add_option("--in", in, "input instance JSON");
    sub->add_option("--out", out, "report path (stdout when absent)");
    sub->add_option("--svg", svg, "write an SVG drawing");
    for (const auto& [key, help] : option_help) sub->add_option("--" + key, values[key], help);
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  std::unique_ptr<catmin_session, decltype(&catmin_session_destroy)> s(catmin_session_create(),
                                                                       &catmin_session_destroy);
  if (!s) return 2;
  for (const auto& [key, value] : values) {
    if (value.empty()) continue;
    if (catmin_set_option(s.get(), key.c_str(), value.c_str()) != CATMIN_OK) {
      std::cerr << "error: " << catmin_last_error(s.get()) << "\n";
      return 2;
    }
  }
  if (!svg.empty()) catmin_set_option(s.get(), "svg", "1");
  if (!in.empty() && catmin_load_file(s.get(), in.c_str()) != CATMIN_OK) {
    std::cerr << "error: " << catmin_last_error(s.get()) << "\n";
    return 2;
  }

  const catmin_status st = catmin_run(s.get(), command.c_str());
  const int code = st == CATMIN_OK ? 0 : st == CATMIN_FAIL ? 1 : 2;
  const char* report = catmin_report_json(s.get());
  if (*catmin_last_error(s.get())) std::cerr << "error: " << catmin_last_error(s.get()) << "\n";
  if (out.empty()) {
    std::fputs(report, stdout);
  } else if (!write_file(out, report)) {
    std::cerr << "error: cannot write " << out << "\n";
    return 2;
  }
  if (!svg.empty()) {
    if (!*catmin_svg(s.get()))
      std::cerr << "note: no drawing for " << command << "\n";
    else if (!write_file(svg, catmin_svg(s.get()))) {
      std::cerr << "error: cannot write " << svg << "\n";
      return 2;
    }
  }
  return code;
}
