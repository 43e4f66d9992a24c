#pragma once

// Inequality-form semidefinite programs and the encoders for the weight and
// robustness quantifiers.
//
// Every problem has the form
//
//   primal:  maximize Tr[B X] + offset   s.t.  s Map(X) <= D,  X >= 0
//   dual:    minimize Tr[D Y] + offset   s.t.  s Map(Y) >= B,  Y >= 0
//
// where Map is the identity, the dephasing map or a group twirl (all
// self-adjoint and unital) and s = +-1. Internally the primal becomes the
// equality-form conic program  s Map(X) + S = D  over the two PSD blocks (X, S).

#include "rw/conic.hpp"
#include "rw/states.hpp"

#include <variant>

namespace rw {

struct IdentityMap {};
using ConstraintMap = std::variant<IdentityMap, Dephasing, UnitaryRep>;

inline ConstraintMap to_constraint_map(const FreeSet& free) {
  return std::visit([](const auto& f) -> ConstraintMap { return f; }, free);
}

inline Matrix apply_map(const ConstraintMap& map, const Matrix& x) {
  return std::visit(
      [&](const auto& m) -> Matrix {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, IdentityMap>) {
          return x;
        } else if constexpr (std::is_same_v<T, Dephasing>) {
          return dephase(x);
        } else {
          return group_average(x, m);
        }
      },
      map);
}

/// Hilbert-Schmidt adjoint of the map, computed directly from its
/// definition: (1/|G|) sum_g U_g^† X U_g for a twirl.
inline Matrix apply_map_adjoint(const ConstraintMap& map, const Matrix& x) {
  if (const auto* rep = std::get_if<UnitaryRep>(&map)) {
    Matrix out = Matrix::Zero(x.rows(), x.cols());
    for (const auto& u : rep->elements()) out += u.adjoint() * x * u;
    return out / static_cast<double>(rep->size());
  }
  return apply_map(map, x);
}

/// Checks <Map(A), B> = <A, Map(B)> on fixed pseudo-random Hermitian probes.
inline bool is_self_adjoint(const ConstraintMap& map, int dim, double tol = 1e-10) {
  Xoshiro256 rng(0x5e1fad7ULL);
  for (int trial = 0; trial < 3; ++trial) {
    const Matrix a = hermitian_part(complex_gaussian(dim, dim, rng));
    const Matrix b = hermitian_part(complex_gaussian(dim, dim, rng));
    const double lhs = inner(apply_map(map, a), b);
    const double rhs = inner(a, apply_map(map, b));
    if (std::abs(lhs - rhs) > tol * (1.0 + std::abs(lhs))) return false;
  }
  return true;
}

struct SdpProblem {
  HermitianMatrix objective;  // B
  ConstraintMap map;
  double map_sign;            // s, +1 or -1
  HermitianMatrix bound;      // D
  double offset = 0.0;
};

struct SdpSolution {
  SolveStatus status;
  double primal_value;
  double dual_value;
  HermitianMatrix primal;  // X*
  HermitianMatrix dual;    // Y*
  double gap;
  int iterations;
  /// Cone violations of the inequality form:
  /// max(lambda_max(s Map(X) - D), -lambda_min(X), 0) and
  /// max(lambda_max(B - s Map(Y)), -lambda_min(Y), 0).
  double primal_residual;
  double dual_residual;
};

namespace detail {

/// Orthonormal Hermitian basis of d x d matrices under Re Tr[A^† B].
inline std::vector<Matrix> hermitian_basis(int d) {
  std::vector<Matrix> basis;
  basis.reserve(static_cast<std::size_t>(d * d));
  for (int i = 0; i < d; ++i) {
    Matrix e = Matrix::Zero(d, d);
    e(i, i) = 1.0;
    basis.push_back(std::move(e));
  }
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      Matrix re = Matrix::Zero(d, d);
      re(i, j) = re(j, i) = M_SQRT1_2;
      basis.push_back(std::move(re));
      Matrix im = Matrix::Zero(d, d);
      im(i, j) = Complex(0.0, M_SQRT1_2);
      im(j, i) = Complex(0.0, -M_SQRT1_2);
      basis.push_back(std::move(im));
    }
  }
  return basis;
}

inline double cone_violation(const Matrix& upper_minus, const Matrix& psd) {
  const double a = eigenvalues(hermitian_part(upper_minus)).maxCoeff();
  const double b = -eigenvalues(hermitian_part(psd)).minCoeff();
  return std::max({a, b, 0.0});
}

inline int map_dim(const ConstraintMap& map) {
  if (const auto* rep = std::get_if<UnitaryRep>(&map)) return rep->dim();
  return -1;
}

}  // namespace detail

inline void validate(const SdpProblem& p) {
  const int d = p.objective.dim();
  if (p.bound.dim() != d) throw std::domain_error("SdpProblem: B and D dimensions differ");
  const int md = detail::map_dim(p.map);
  if (md != -1 && md != d) throw std::domain_error("SdpProblem: map dimension mismatch");
  if (p.map_sign != 1.0 && p.map_sign != -1.0) throw std::domain_error("SdpProblem: map_sign must be +-1");
}

inline ConicProblem to_conic(const SdpProblem& p) {
  const int d = p.objective.dim();
  const auto basis = detail::hermitian_basis(d);
  ConicProblem c;
  c.block_dims = {d, d};
  c.cost = {-p.objective.matrix(), Matrix::Zero(d, d)};
  c.rhs = RealVector(static_cast<Eigen::Index>(basis.size()));
  c.constraints.reserve(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    Matrix ax = p.map_sign * apply_map_adjoint(p.map, basis[k]);
    if (ax.cwiseAbs().maxCoeff() < 1e-15) ax.resize(0, 0);
    c.constraints.push_back({{std::move(ax), basis[k]}});
    c.rhs(static_cast<Eigen::Index>(k)) = inner(basis[k], p.bound.matrix());
  }
  // Strictly feasible dual start Y = t I when one exists: need t > 0 and
  // s t I - B > 0 (every shipped map is unital). Points too close to the
  // boundary make a worse start than the generic one.
  const double bmax = max_eigenvalue(p.objective);
  std::optional<double> t;
  if (p.map_sign > 0.0) {
    t = std::max(1.0, 2.0 * bmax);
  } else if (bmax < -1e-3) {
    t = -bmax / 2.0;
  }
  if (t) {
    // Conic multiplier y corresponds to Y = -sum_k y_k E_k.
    RealVector y(c.rhs.size());
    for (std::size_t k = 0; k < basis.size(); ++k) {
      y(static_cast<Eigen::Index>(k)) = -*t * basis[k].trace().real();
    }
    c.initial_y = std::move(y);
  }
  return c;
}

/// Running record of every solve on this thread.
struct SolveTally {
  long solves = 0;
  long optimal = 0;
  double worst_gap = 0.0;  // over optimal solves
  double worst_residual = 0.0;
};

inline SolveTally& solve_tally() {
  thread_local SolveTally t;
  return t;
}

inline SdpSolution solve(const SdpProblem& p, const SolverSettings& settings = {}) {
  validate(p);
  const int d = p.objective.dim();
  if (std::holds_alternative<UnitaryRep>(p.map) && !is_self_adjoint(p.map, d)) {
    throw std::domain_error("solve: group average is not self-adjoint for this representation");
  }
  const ConicProblem conic = to_conic(p);
  const ConicSolution cs = solve_conic(conic, settings);

  const auto basis = detail::hermitian_basis(d);
  Matrix y = Matrix::Zero(d, d);
  for (std::size_t k = 0; k < basis.size(); ++k) y -= cs.y(static_cast<Eigen::Index>(k)) * basis[k];

  HermitianMatrix x_star(hermitian_part(cs.x[0]), 1e-6);
  HermitianMatrix y_star(hermitian_part(y), 1e-6);
  const Matrix& b = p.objective.matrix();
  const Matrix& dm = p.bound.matrix();
  const double pv = inner(b, x_star.matrix()) + p.offset;
  const double dv = inner(dm, y_star.matrix()) + p.offset;
  const double pres =
      detail::cone_violation(p.map_sign * apply_map(p.map, x_star.matrix()) - dm, x_star.matrix());
  const double dres =
      detail::cone_violation(b - p.map_sign * apply_map(p.map, y_star.matrix()), y_star.matrix());

  // The status is decided on the recovered pair itself: a run that stopped
  // short of its internal targets still counts when the certificate holds.
  const bool certified = std::abs(pv - dv) <= settings.accept_gap &&
                         pres <= settings.accept_residual && dres <= settings.accept_residual;
  SolveStatus status = cs.status;
  if (status != SolveStatus::infeasible) status = certified ? SolveStatus::optimal : SolveStatus::max_iter;
  auto& tally = solve_tally();
  ++tally.solves;
  if (status == SolveStatus::optimal) {
    ++tally.optimal;
    tally.worst_gap = std::max(tally.worst_gap, std::abs(pv - dv));
    tally.worst_residual = std::max({tally.worst_residual, pres, dres});
  }
  return {status, pv, dv, std::move(x_star), std::move(y_star), std::abs(pv - dv), cs.iterations,
          pres, dres};
}

/// maximize Tr[sigma] s.t. Delta(sigma) <= rho, sigma >= 0; optimum 1 - C_w.
/// The dual optimiser Y* gives the witness W* = I - Y*.
inline SdpProblem encode_coherence_weight(const DensityMatrix& rho) {
  return {HermitianMatrix::identity(rho.dim()), Dephasing{}, 1.0, rho.hermitian(), 0.0};
}

/// maximize Tr[rho W] s.t. Delta(W) <= 0, W <= I, written with X = I - W:
/// maximize 1 - Tr[rho X] s.t. -Delta(X) <= -I, X >= 0. Optimum C_w; the
/// primal optimiser X* gives W* = I - X*.
inline SdpProblem encode_coherence_weight_dual(const DensityMatrix& rho) {
  return {-rho.hermitian(), Dephasing{}, -1.0, -HermitianMatrix::identity(rho.dim()), 1.0};
}

/// maximize Tr[sigma] s.t. G(sigma) <= rho, sigma >= 0; optimum 1 - A_w.
inline SdpProblem encode_asymmetry_weight(const DensityMatrix& rho, const UnitaryRep& rep) {
  if (rep.dim() != rho.dim()) throw std::domain_error("encode_asymmetry_weight: dimension mismatch");
  return {HermitianMatrix::identity(rho.dim()), rep, 1.0, rho.hermitian(), 0.0};
}

/// maximize Tr[rho W] s.t. G(W) <= 0, W <= I; optimum A_w.
inline SdpProblem encode_asymmetry_weight_dual(const DensityMatrix& rho, const UnitaryRep& rep) {
  if (rep.dim() != rho.dim()) throw std::domain_error("encode_asymmetry_weight_dual: dimension mismatch");
  return {-rho.hermitian(), rep, -1.0, -HermitianMatrix::identity(rho.dim()), 1.0};
}

/// Robustness: minimize Tr[sigma] - 1 over free sigma >= rho. Free cones are
/// {P(Y) : Y >= 0} for the free projection P, so this is the dual side of
///   maximize Tr[rho X] - 1 s.t. P(X) <= I, X >= 0,
/// whose optimum is C_R (dephasing) or A_R (twirl). sigma* = P(Y*).
inline SdpProblem encode_robustness(const DensityMatrix& rho, const FreeSet& free) {
  ConstraintMap map = to_constraint_map(free);
  const int md = detail::map_dim(map);
  if (md != -1 && md != rho.dim()) throw std::domain_error("encode_robustness: dimension mismatch");
  return {rho.hermitian(), std::move(map), 1.0, HermitianMatrix::identity(rho.dim()), -1.0};
}

}  // namespace rw
