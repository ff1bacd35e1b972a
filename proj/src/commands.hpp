#pragma once

#include "io.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace catmin {

struct CommandOptions {
  std::uint64_t seed = 1;
  int refine = 1;
  int samples = 0;  // 0: command default
  int trials = 100;
  double amplitude = 0.05;
  double h = 1.0 / 64.0;
  bool svg = false;
  std::optional<double> tol_zero, tol_descent, tol_angle, tol_geodesic;
};

struct CommandResult {
  int exit_code = 0;  // 0 pass, 1 fail, 2 input error
  Json report;
  std::string svg;
};

const std::vector<std::string>& command_names();

// Never throws; errors become exit code 2 (input) or 1 (numerical,
// unsupported) with the message in the report.
CommandResult run_command(const std::string& name, const std::optional<Json>& instance, const CommandOptions& opt);

// Looks a relative path up under $CATMIN_FIXTURES when it does not exist as given.
std::string resolve_input_path(const std::string& path);

// Ordering chain length >= intrinsic >= connecting, entrywise with slack.
struct OrderingChain {
  double worst_length_vs_intrinsic = 0.0;     // max of intrinsic - length
  double worst_intrinsic_vs_connecting = 0.0; // max of connecting - intrinsic
  bool pass = true;
};
OrderingChain ordering_chain(const PseudometricMatrix& length, const PseudometricMatrix& intrinsic,
                             const PseudometricMatrix& connecting, double slack);

}  // namespace catmin
