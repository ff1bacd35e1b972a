#include "field_system.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace catmin {

std::vector<std::string> patch_diagnostics(const HeightFieldPatch& p) {
  std::vector<std::string> out;
  if (p.nx < 4 || p.ny < 4) out.push_back("grid: at least 4 nodes per direction required");
  if (!(p.h > 0.0) || !std::isfinite(p.h)) out.push_back("h: spacing must be positive");
  if (p.s.size() != static_cast<std::size_t>(std::max(p.nx, 0)) * std::max(p.ny, 0))
    out.push_back("s: expected nx * ny values");
  for (std::size_t k = 0; k < p.s.size(); ++k)
    if (!p.s[k].allFinite()) {
      out.push_back("s[" + std::to_string(k) + "]: not finite");
      break;
    }
  return out;
}

namespace {

void require_patch(const HeightFieldPatch& p) {
  if (auto d = patch_diagnostics(p); !d.empty()) fail_input("height field patch: " + d.front());
}

struct Derivs {
  std::vector<Vec3> sx, sy, sxx, sxy, syy;
};

Derivs derivatives(const HeightFieldPatch& p) {
  Derivs d;
  const std::size_t n = p.s.size();
  d.sx.resize(n);
  d.sy.resize(n);
  for (int j = 0; j < p.ny; ++j)
    for (int i = 0; i < p.nx; ++i) {
      const auto g = grid_gradient(p.s, p.nx, p.ny, p.h, i, j);
      d.sx[j * p.nx + i] = g[0];
      d.sy[j * p.nx + i] = g[1];
    }
  d.sxx.resize(n);
  d.sxy.resize(n);
  d.syy.resize(n);
  for (int j = 0; j < p.ny; ++j)
    for (int i = 0; i < p.nx; ++i) {
      const auto gx = grid_gradient(d.sx, p.nx, p.ny, p.h, i, j);
      const auto gy = grid_gradient(d.sy, p.nx, p.ny, p.h, i, j);
      const std::size_t k = static_cast<std::size_t>(j) * p.nx + i;
      d.sxx[k] = gx[0];
      d.sxy[k] = 0.5 * (gx[1] + gy[0]);
      d.syy[k] = gy[1];
    }
  return d;
}

std::vector<Vec3> push_forward(const Derivs& d, const std::vector<Vec2>& v) {
  std::vector<Vec3> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = v[k].x() * d.sx[k] + v[k].y() * d.sy[k];
  return out;
}

void require_fields(const HeightFieldPatch& p, const FieldArray& v) {
  if (v.nx != p.nx || v.ny != p.ny) fail_input("field array does not match the patch grid");
  for (const auto& f : v.v)
    if (f.size() != p.s.size()) fail_input("field array does not match the patch grid");
}

double trapezoid_weight(const HeightFieldPatch& p, int i, int j) {
  const double wx = (i == 0 || i == p.nx - 1) ? 0.5 : 1.0;
  const double wy = (j == 0 || j == p.ny - 1) ? 0.5 : 1.0;
  return wx * wy * p.h * p.h;
}

}  // namespace

HeightFieldPatch sample_patch(const std::function<Vec3(double, double)>& f, double x0, double y0, double h, int nx,
                              int ny) {
  HeightFieldPatch p;
  p.nx = nx;
  p.ny = ny;
  p.x0 = x0;
  p.y0 = y0;
  p.h = h;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) p.s.push_back(f(x0 + i * h, y0 + j * h));
  require_patch(p);
  return p;
}

HeightFieldPatch hyperbolic_paraboloid_patch(double half_width, double h) {
  if (!(half_width > 0.0) || !(h > 0.0)) fail_input("hyperbolic_paraboloid_patch: sizes must be positive");
  const int n = static_cast<int>(std::lround(2.0 * half_width / h)) + 1;
  return sample_patch([](double u, double v) { return Vec3(0.5 * (u + v), 0.5 * (u - v), u * v); }, -half_width,
                      -half_width, h, n, n);
}

std::vector<FrameNode> curvature_frame(const HeightFieldPatch& p, double tol) {
  require_patch(p);
  const Derivs d = derivatives(p);
  std::vector<FrameNode> frame(p.s.size());
  for (int j = 0; j < p.ny; ++j)
    for (int i = 0; i < p.nx; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * p.nx + i;
      FrameNode& f = frame[k];
      const Vec3 n = d.sx[k].cross(d.sy[k]);
      if (!(n.norm() > 0.0)) fail_input("curvature_frame: degenerate parametrization at node (" +
                                        std::to_string(i) + ", " + std::to_string(j) + ")");
      f.normal = n.normalized();
      Eigen::Matrix2d I, II;
      I << d.sx[k].dot(d.sx[k]), d.sx[k].dot(d.sy[k]), d.sx[k].dot(d.sy[k]), d.sy[k].dot(d.sy[k]);
      II << d.sxx[k].dot(f.normal), d.sxy[k].dot(f.normal), d.sxy[k].dot(f.normal), d.syy[k].dot(f.normal);
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> ges(II, I);
      f.k2 = ges.eigenvalues()(0);
      f.k1 = ges.eigenvalues()(1);
      if (!(f.k1 * f.k2 < -tol)) {
        std::ostringstream os;
        os << "curvature_frame: node (" << i << ", " << j << ") at (" << p.param(i, j).x() << ", "
           << p.param(i, j).y() << ") is not strictly saddle (k1 k2 = " << f.k1 * f.k2 << ")";
        throw Error(ErrorKind::InvalidInput, os.str());
      }
      Vec2 xi1 = ges.eigenvectors().col(1), xi2 = ges.eigenvectors().col(0);

      // Null directions of II, unit in the parameter plane, a1 nearer the x-axis.
      Vec2 na = (std::sqrt(-f.k2) * xi1 + std::sqrt(f.k1) * xi2).normalized();
      Vec2 nb = (std::sqrt(-f.k2) * xi1 - std::sqrt(f.k1) * xi2).normalized();
      auto orient = [](Vec2 v, int axis) { return v[axis] < 0.0 ? Vec2(-v) : v; };
      na = orient(na, 0);
      nb = orient(nb, 0);
      const double ta = std::abs(na.x()) - std::abs(na.y()), tb = std::abs(nb.x()) - std::abs(nb.y());
      bool a_first = ta > tb + 1e-12 || (std::abs(ta - tb) <= 1e-12 && na.y() < nb.y());
      f.a1p = a_first ? na : nb;
      f.a2p = orient(a_first ? nb : na, 1);
      f.a1 = f.a1p.x() * d.sx[k] + f.a1p.y() * d.sy[k];
      f.a2 = f.a2p.x() * d.sx[k] + f.a2p.y() * d.sy[k];

      // Principal directions bisect the asymptotic ones; orient each along
      // whichever of a1 + a2, a1 - a2 it follows.
      const Vec2 sum = f.a1p + f.a2p, diff = f.a1p - f.a2p;
      auto orient_principal = [&](Vec2 xi) {
        const double ps = (I * xi).dot(sum), pd = (I * xi).dot(diff);
        const double key = std::abs(ps) >= std::abs(pd) ? ps : pd;
        return key < 0.0 ? Vec2(-xi) : xi;
      };
      f.e1p = orient_principal(xi1);
      f.e2p = orient_principal(xi2);
      f.e1 = f.e1p.x() * d.sx[k] + f.e1p.y() * d.sy[k];
      f.e2 = f.e2p.x() * d.sx[k] + f.e2p.y() * d.sy[k];
    }
  return frame;
}

double energy(const HeightFieldPatch& p, const FieldArray& v) {
  require_patch(p);
  require_fields(p, v);
  const Derivs d = derivatives(p);
  double e = 0.0;
  for (const auto& field : v.v) {
    const auto vs = push_forward(d, field);
    for (int j = 0; j < p.ny; ++j)
      for (int i = 0; i < p.nx; ++i) e += trapezoid_weight(p, i, j) * vs[j * p.nx + i].squaredNorm();
  }
  return e;
}

std::vector<Vec3> field_second_derivative(const HeightFieldPatch& p, const FieldArray& v, int idx) {
  require_patch(p);
  require_fields(p, v);
  if (idx < 0 || idx > 3) fail_input("field_second_derivative: field index out of range");
  const Derivs d = derivatives(p);
  const auto F = push_forward(d, v.v[idx]);
  std::vector<Vec3> out(p.s.size());
  for (int j = 0; j < p.ny; ++j)
    for (int i = 0; i < p.nx; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * p.nx + i;
      const auto g = grid_gradient(F, p.nx, p.ny, p.h, i, j);
      out[k] = v.v[idx][k].x() * g[0] + v.v[idx][k].y() * g[1];
    }
  return out;
}

std::vector<Vec3> laplacian(const HeightFieldPatch& p, const FieldArray& v) {
  require_patch(p);
  require_fields(p, v);
  const Derivs d = derivatives(p);
  std::vector<Vec3> out(p.s.size(), Vec3::Zero());
  for (const auto& field : v.v) {
    const auto F = push_forward(d, field);
    for (int j = 1; j + 1 < p.ny; ++j)
      for (int i = 1; i + 1 < p.nx; ++i) {
        const std::size_t k = static_cast<std::size_t>(j) * p.nx + i;
        const auto g = grid_gradient(F, p.nx, p.ny, p.h, i, j);
        out[k] += field[k].x() * g[0] + field[k].y() * g[1];
      }
  }
  return out;
}

double max_interior_norm(const HeightFieldPatch& p, const std::vector<Vec3>& field) {
  double m = 0.0;
  for (int j = 1; j + 1 < p.ny; ++j)
    for (int i = 1; i + 1 < p.nx; ++i) m = std::max(m, field[static_cast<std::size_t>(j) * p.nx + i].norm());
  return m;
}

FieldSolution solve_field_system(const HeightFieldPatch& p) {
  require_patch(p);
  if (p.nx != p.ny)
    throw Error(ErrorKind::InvalidInput, "characteristic lattice needs a square grid (CFL 0.5 configuration)",
                "solve_field_system");
  const int N = p.nx;
  const double h = p.h;
  const auto frame = curvature_frame(p);
  for (std::size_t k = 0; k < frame.size(); ++k)
    if (std::abs(frame[k].a1p.y()) > 1e-3 || std::abs(frame[k].a2p.x()) > 1e-3)
      throw Error(ErrorKind::Unsupported, "patch coordinates are not asymptotic at node " + std::to_string(k),
                  "solve_field_system");

  const Derivs d = derivatives(p);
  const std::size_t n = p.s.size();
  FieldSolution sol;
  FieldArray& fa = sol.fields;
  fa.nx = fa.ny = N;
  for (auto& f : fa.v) f.assign(n, Vec2::Zero());
  for (std::size_t k = 0; k < n; ++k) {
    fa.v[0][k] = frame[k].e1p / std::sqrt(std::abs(frame[k].k1));
    fa.v[1][k] = frame[k].e2p / std::sqrt(std::abs(frame[k].k2));
  }
  // Tangential data: T = v1(v1 s) + v2(v2 s), a1(a1 s) = s_xx, a2(a2 s) = s_yy,
  // each expressed in the basis (s_x, s_y) by least squares.
  std::vector<Vec3> T(n, Vec3::Zero());
  for (int f = 0; f < 2; ++f) {
    const auto F = push_forward(d, fa.v[f]);
    for (int j = 0; j < N; ++j)
      for (int i = 0; i < N; ++i) {
        const std::size_t k = static_cast<std::size_t>(j) * N + i;
        const auto g = grid_gradient(F, N, N, h, i, j);
        T[k] += fa.v[f][k].x() * g[0] + fa.v[f][k].y() * g[1];
      }
  }
  std::vector<Vec2> tau(n), A1(n), A2(n);
  for (std::size_t k = 0; k < n; ++k) {
    Eigen::Matrix<double, 3, 2> B;
    B.col(0) = d.sx[k];
    B.col(1) = d.sy[k];
    const auto qr = B.colPivHouseholderQr();
    tau[k] = qr.solve(T[k]);
    A1[k] = qr.solve(d.sxx[k]);
    A2[k] = qr.solve(d.syy[k]);
    sol.max_tangency_residual = std::max(sol.max_tangency_residual, std::abs(T[k].dot(frame[k].normal)));
  }
  auto F1 = [&](std::size_t k, double w1, double w2) { return -2.0 * (tau[k].x() + A1[k].x() * w1 + A2[k].x() * w2); };
  auto F2 = [&](std::size_t k, double w1, double w2) { return -2.0 * (tau[k].y() + A1[k].y() * w1 + A2[k].y() * w2); };

  std::vector<double> w1(n, 0.0), w2(n, 0.0);
  auto id = [N](int i, int j) { return static_cast<std::size_t>(j) * N + i; };
  for (int i = 0; i < N; ++i) {
    w1[id(i, N - 1 - i)] = 1.0;
    w2[id(i, N - 1 - i)] = 1.0;
  }
  auto check = [&](int i, int j) {
    const std::size_t k = id(i, j);
    if (!(w1[k] > 0.0) || !(w2[k] > 0.0)) {
      std::ostringstream os;
      os << "loss of positivity at node (" << i << ", " << j << "): w = (" << w1[k] << ", " << w2[k]
         << "); shrink the patch";
      throw Error(ErrorKind::Numerical, os.str(), "solve_field_system");
    }
  };
  // Trapezoidal steps along both characteristic families; F is affine in w so
  // each node is a 2x2 linear solve. Forward from the anti-diagonal, then back.
  for (int level = N; level <= 2 * N - 2; ++level)
    for (int i = level - (N - 1); i <= N - 1; ++i) {
      const int j = level - i;
      const std::size_t k = id(i, j), kw = id(i - 1, j), ks = id(i, j - 1);
      Eigen::Matrix2d M;
      M << 1.0 + h * A1[k].x(), h * A2[k].x(), h * A1[k].y(), 1.0 + h * A2[k].y();
      const Vec2 rhs(w1[kw] + 0.5 * h * F1(kw, w1[kw], w2[kw]) - h * tau[k].x(),
                     w2[ks] + 0.5 * h * F2(ks, w1[ks], w2[ks]) - h * tau[k].y());
      const Vec2 w = M.partialPivLu().solve(rhs);
      w1[k] = w.x();
      w2[k] = w.y();
      check(i, j);
    }
  for (int level = N - 2; level >= 0; --level)
    for (int i = 0; i <= level; ++i) {
      const int j = level - i;
      const std::size_t k = id(i, j), ke = id(i + 1, j), kn = id(i, j + 1);
      Eigen::Matrix2d M;
      M << 1.0 - h * A1[k].x(), -h * A2[k].x(), -h * A1[k].y(), 1.0 - h * A2[k].y();
      const Vec2 rhs(w1[ke] - 0.5 * h * F1(ke, w1[ke], w2[ke]) + h * tau[k].x(),
                     w2[kn] - 0.5 * h * F2(kn, w1[kn], w2[kn]) + h * tau[k].y());
      const Vec2 w = M.partialPivLu().solve(rhs);
      w1[k] = w.x();
      w2[k] = w.y();
      check(i, j);
    }

  fa.lambda1.resize(n);
  fa.lambda2.resize(n);
  sol.min_lambda = kInf;
  for (std::size_t k = 0; k < n; ++k) {
    fa.lambda1[k] = std::sqrt(w1[k]);
    fa.lambda2[k] = std::sqrt(w2[k]);
    fa.v[2][k] = Vec2(fa.lambda1[k], 0.0);
    fa.v[3][k] = Vec2(0.0, fa.lambda2[k]);
    sol.min_lambda = std::min({sol.min_lambda, fa.lambda1[k], fa.lambda2[k]});
  }
  return sol;
}

PerturbationReport perturbation_evidence(const HeightFieldPatch& p, const FieldArray& v, int trials,
                                         std::uint64_t seed, double amplitude) {
  require_patch(p);
  require_fields(p, v);
  if (trials < 0) fail_input("perturbation_evidence: trials must be >= 0");
  PerturbationReport rep;
  rep.base_energy = energy(p, v);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> mode(1, 3);
  std::normal_distribution<double> gauss(0.0, amplitude);
  rep.min_delta = kInf;
  rep.min_convexity_gap = kInf;
  auto shifted = [&](const std::vector<Vec3>& phi, double t) {
    HeightFieldPatch q = p;
    for (std::size_t k = 0; k < q.s.size(); ++k) q.s[k] += t * phi[k];
    return q;
  };
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<Vec3> phi(p.s.size(), Vec3::Zero());
    for (int term = 0; term < 3; ++term) {
      const int kx = mode(rng), ky = mode(rng);
      const Vec3 c(gauss(rng), gauss(rng), gauss(rng));
      for (int j = 0; j < p.ny; ++j)
        for (int i = 0; i < p.nx; ++i) {
          const double x = static_cast<double>(i) / (p.nx - 1), y = static_cast<double>(j) / (p.ny - 1);
          phi[static_cast<std::size_t>(j) * p.nx + i] += std::sin(kx * kPi * x) * std::sin(ky * kPi * y) * c;
        }
    }
    PerturbationTrial t;
    t.energy = energy(shifted(phi, 1.0), v);
    t.delta = t.energy - rep.base_energy;
    t.convexity_gap = kInf;
    for (double s : {0.25, 0.5, 0.75}) {
      const double mid = energy(shifted(phi, s), v);
      t.convexity_gap = std::min(t.convexity_gap, (1.0 - s) * rep.base_energy + s * t.energy - mid);
    }
    rep.min_delta = std::min(rep.min_delta, t.delta);
    rep.min_convexity_gap = std::min(rep.min_convexity_gap, t.convexity_gap);
    rep.no_decrease = rep.no_decrease && t.delta >= -1e-9;
    rep.convex = rep.convex && t.convexity_gap >= -1e-12 * std::max(1.0, rep.base_energy + t.energy);
    rep.trials.push_back(t);
  }
  if (trials == 0) rep.min_delta = rep.min_convexity_gap = 0.0;
  return rep;
}

}  // namespace catmin
