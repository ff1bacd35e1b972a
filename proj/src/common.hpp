#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace catmin {

/// A point of a Euclidean target space; the dimension is carried at runtime.
using Vec = Eigen::VectorXd;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class ErrorKind {
  InvalidInput,   // malformed instance or violated precondition
  Numerical,      // iteration or tolerance failure
  Unsupported,    // operation not available for this target
};

/// Exception type of the core library. The C API maps `kind` to status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::string stage = {})
      : std::runtime_error(stage.empty() ? what : stage + ": " + what),
        kind_(kind),
        stage_(std::move(stage)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& stage() const noexcept { return stage_; }

 private:
  ErrorKind kind_;
  std::string stage_;
};

[[noreturn]] inline void fail_input(const std::string& what) {
  throw Error(ErrorKind::InvalidInput, what);
}

/// Tolerances shared by the certifying operations.
struct Tolerances {
  double zero = 1e-9;      // pseudodistance identification
  double descent = 1e-8;   // LP value t* accepted as stationary
  double angle = 1e-6;     // slack on angle sums against 2*pi
  double geodesic = 1e-9;  // per-edge geodesic residual
};

}  // namespace catmin
