#pragma once

// Primal-dual path-following solver for small dense semidefinite programs
// over complex Hermitian blocks:
//
//   minimize   <C, X>          maximize  b'y
//   subject to A(X) = b        subject to C - A^*(y) = Z
//              X >= 0                     Z >= 0
//
// with <A, B> = Re Tr[A^† B] and X, Z block diagonal. Search directions use
// Nesterov-Todd scaling with a Mehrotra predictor-corrector. The method is
// an infeasible-start one: residuals shrink geometrically with the step
// lengths, and stay at round-off level once they reach it.

#include "rw/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace rw {

enum class SolveStatus { optimal, max_iter, infeasible };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::max_iter: return "max-iter";
    case SolveStatus::infeasible: return "infeasible";
  }
  return "unknown";
}

struct IterationLog {
  int iteration;
  double primal_objective;
  double dual_objective;
  double gap;             // |primal - dual|
  double complementarity; // <X, Z>
  double primal_residual; // ||b - A(X)||
  double dual_residual;   // ||C - A^*(y) - Z||
  double primal_step;
  double dual_step;
};

struct SolverSettings {
  double gap_target = 1e-9;
  double feasibility_target = 1e-10;
  // A run that stalls or exhausts its iterations is still reported optimal
  // when it is inside these acceptance bounds.
  double accept_gap = 1e-7;
  double accept_residual = 1e-8;
  int max_iterations = 200;
  double step_fraction = 0.98;
  double divergence_bound = 1e10;
  std::function<void(const IterationLog&)> on_iteration;
};

/// One linear equality <A_k, X> = b_k; `blocks[b]` is empty when A_k has no
/// component in block b.
struct ConicConstraint {
  std::vector<Matrix> blocks;
};

struct ConicProblem {
  std::vector<int> block_dims;
  std::vector<Matrix> cost;
  std::vector<ConicConstraint> constraints;
  RealVector rhs;
  /// Optional starting y; used only if C - A^*(y) is positive definite.
  std::optional<RealVector> initial_y;
};

struct ConicSolution {
  SolveStatus status = SolveStatus::max_iter;
  std::vector<Matrix> x;
  RealVector y;
  std::vector<Matrix> z;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
};

namespace detail {

inline double frob2(const std::vector<Matrix>& v) {
  double s = 0.0;
  for (const auto& m : v) s += m.squaredNorm();
  return s;
}

inline double inner_blocks(const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += inner(a[i], b[i]);
  return s;
}

/// Largest alpha such that X + alpha dX stays PSD (infinity if unbounded).
inline double max_step(const Eigen::LLT<Matrix>& chol_x, const Matrix& dx) {
  const Matrix l_inv_dx = chol_x.matrixL().solve(dx);
  const Matrix t = chol_x.matrixL().solve(l_inv_dx.adjoint());
  const double lmin = eigenvalues(hermitian_part(t)).minCoeff();
  return lmin < 0.0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

struct NtScaling {
  Matrix g;       // G with G^-1 X G^-† = G^† Z G = diag(v)
  Matrix g_inv;
  Matrix w;       // G G^†, satisfies W Z W = X
  RealVector v;
};

inline std::optional<NtScaling> nt_scaling(const Matrix& x, const Matrix& z) {
  Eigen::LLT<Matrix> lx(x);
  Eigen::LLT<Matrix> lz(z);
  if (lx.info() != Eigen::Success || lz.info() != Eigen::Success) return std::nullopt;
  const Matrix l = lx.matrixL();
  const Matrix r = lz.matrixL();
  Eigen::JacobiSVD<Matrix> svd(r.adjoint() * l, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector s = svd.singularValues();
  if (!(s.minCoeff() > 0.0)) return std::nullopt;
  const RealVector s_inv_sqrt = s.cwiseSqrt().cwiseInverse();
  NtScaling out;
  out.g = l * svd.matrixV() * s_inv_sqrt.cast<Complex>().asDiagonal();
  out.g_inv = s.cwiseSqrt().cast<Complex>().asDiagonal() * svd.matrixV().adjoint() *
              lx.matrixL().solve(Matrix::Identity(x.rows(), x.cols()));
  out.w = out.g * out.g.adjoint();
  out.v = s;
  return out;
}

}  // namespace detail

inline constexpr double kLaggingSigma = 0.5;

class ConicSolver {
 public:
  ConicSolver(const ConicProblem& p, const SolverSettings& s) : p_(p), s_(s) {
    m_ = static_cast<int>(p_.constraints.size());
    nb_ = static_cast<int>(p_.block_dims.size());
    n_total_ = 0;
    for (int d : p_.block_dims) n_total_ += d;
  }

  ConicSolution solve() {
    initialise();
    ConicSolution sol;
    const double b_norm = p_.rhs.norm();
    const double c_norm = std::sqrt(detail::frob2(p_.cost));
    int stalls = 0;
    double alpha_p = 0.0;
    double alpha_d = 0.0;
    // Best iterate seen, by distance to the acceptance bounds; returned when
    // the run ends without reaching its targets.
    double best_merit = std::numeric_limits<double>::infinity();
    ConicSolution best;

    for (int iter = 0;; ++iter) {
      const RealVector rp = p_.rhs - apply_a(x_);
      std::vector<Matrix> rd = apply_at(y_);
      for (int b = 0; b < nb_; ++b) rd[b] = p_.cost[b] - rd[b] - z_[b];
      const double pobj = detail::inner_blocks(p_.cost, x_);
      const double dobj = p_.rhs.dot(y_);
      const double xz = detail::inner_blocks(x_, z_);
      const double rp_norm = rp.norm();
      const double rd_norm = std::sqrt(detail::frob2(rd));
      const double gap = std::abs(pobj - dobj);

      sol.iterations = iter;
      sol.primal_objective = pobj;
      sol.dual_objective = dobj;
      sol.gap = gap;
      sol.primal_residual = rp_norm;
      sol.dual_residual = rd_norm;

      if (s_.on_iteration) {
        s_.on_iteration({iter, pobj, dobj, gap, xz, rp_norm, rd_norm, alpha_p, alpha_d});
      }
      const double merit = std::max({gap / s_.accept_gap, rp_norm / s_.accept_residual,
                                     rd_norm / s_.accept_residual});
      if (merit < best_merit) {
        best_merit = merit;
        best = sol;
        best.x = x_;
        best.y = y_;
        best.z = z_;
      }

      const bool feasible = rp_norm <= s_.feasibility_target * (1.0 + b_norm) &&
                            rd_norm <= s_.feasibility_target * (1.0 + c_norm);
      if (feasible && gap <= s_.gap_target && xz <= s_.gap_target) {
        sol.status = SolveStatus::optimal;
        break;
      }
      if (std::sqrt(detail::frob2(x_)) > s_.divergence_bound || y_.norm() > s_.divergence_bound) {
        sol.status = SolveStatus::infeasible;
        break;
      }
      if (iter >= s_.max_iterations || stalls >= 3) {
        sol.status = SolveStatus::max_iter;
        break;
      }

      const double mu = xz / n_total_;
      // pobj - dobj = <X,Z> - y.rp + <rd,X>; when the residual terms dominate,
      // complementarity is outrunning feasibility.
      const bool lagging = std::abs(pobj - dobj - xz) > xz;
      if (!step(rp, rd, mu, lagging, alpha_p, alpha_d)) {
        sol.status = SolveStatus::max_iter;
        break;
      }
      stalls = (std::max(alpha_p, alpha_d) < 1e-8) ? stalls + 1 : 0;
    }

    if (sol.status == SolveStatus::optimal) {
      sol.x = x_;
      sol.y = y_;
      sol.z = z_;
      return sol;
    }
    if (sol.status == SolveStatus::max_iter) {
      const int iterations = sol.iterations;
      sol = std::move(best);
      sol.iterations = iterations;
      sol.status = best_merit <= 1.0 ? SolveStatus::optimal : SolveStatus::max_iter;
      return sol;
    }
    sol.x = x_;
    sol.y = y_;
    sol.z = z_;
    return sol;
  }

 private:
  RealVector apply_a(const std::vector<Matrix>& x) const {
    RealVector out = RealVector::Zero(m_);
    for (int k = 0; k < m_; ++k) {
      const auto& con = p_.constraints[k];
      for (int b = 0; b < nb_; ++b) {
        if (con.blocks[b].size() != 0) out(k) += inner(con.blocks[b], x[b]);
      }
    }
    return out;
  }

  std::vector<Matrix> apply_at(const RealVector& y) const {
    std::vector<Matrix> out;
    out.reserve(nb_);
    for (int b = 0; b < nb_; ++b) out.push_back(Matrix::Zero(p_.block_dims[b], p_.block_dims[b]));
    for (int k = 0; k < m_; ++k) {
      const auto& con = p_.constraints[k];
      for (int b = 0; b < nb_; ++b) {
        if (con.blocks[b].size() != 0) out[b] += y(k) * con.blocks[b];
      }
    }
    return out;
  }

  void initialise() {
    x_.clear();
    z_.clear();
    y_ = RealVector::Zero(m_);
    for (int b = 0; b < nb_; ++b) {
      const int n = p_.block_dims[b];
      double max_ratio = 0.0;
      double max_a = 0.0;
      for (int k = 0; k < m_; ++k) {
        const auto& blk = p_.constraints[k].blocks[b];
        const double a = blk.size() != 0 ? blk.norm() : 0.0;
        max_ratio = std::max(max_ratio, (1.0 + std::abs(p_.rhs(k))) / (1.0 + a));
        max_a = std::max(max_a, a);
      }
      const double xi = std::max({10.0, std::sqrt(static_cast<double>(n)), n * max_ratio});
      const double eta = std::max({10.0, std::sqrt(static_cast<double>(n)), max_a, p_.cost[b].norm()});
      x_.push_back(xi * Matrix::Identity(n, n));
      z_.push_back(eta * Matrix::Identity(n, n));
    }
    if (p_.initial_y) {
      std::vector<Matrix> z = apply_at(*p_.initial_y);
      bool pd = true;
      for (int b = 0; b < nb_ && pd; ++b) {
        z[b] = hermitian_part(p_.cost[b] - z[b]);
        pd = Eigen::LLT<Matrix>(z[b]).info() == Eigen::Success &&
             eigenvalues(z[b]).minCoeff() > 0.0;
      }
      if (pd) {
        y_ = *p_.initial_y;
        z_ = std::move(z);
      }
    }
  }

  struct Direction {
    std::vector<Matrix> dx;
    RealVector dy;
    std::vector<Matrix> dz;
  };

  Direction solve_direction(const std::vector<Matrix>& rc, const RealVector& rp,
                            const std::vector<Matrix>& rd) {
    // dX + W dZ W = Rc,  A(dX) = rp,  A^*(dy) + dZ = rd
    std::vector<Matrix> tmp(nb_);
    for (int b = 0; b < nb_; ++b) tmp[b] = rc[b] - scaling_[b].w * rd[b] * scaling_[b].w;
    const RealVector rhs = rp - apply_a(tmp);
    Direction d;
    d.dy = schur_solve(rhs);
    d.dz = apply_at(d.dy);
    d.dx.resize(nb_);
    for (int b = 0; b < nb_; ++b) {
      d.dz[b] = hermitian_part(rd[b] - d.dz[b]);
      d.dx[b] = hermitian_part(rc[b] - scaling_[b].w * d.dz[b] * scaling_[b].w);
    }
    return d;
  }

  RealVector schur_solve(const RealVector& rhs) const {
    const RealVector scaled = schur_scale_.cwiseProduct(rhs);
    RealVector out = schur_llt_.info() == Eigen::Success ? RealVector(schur_llt_.solve(scaled))
                                                         : RealVector(schur_ldlt_.solve(scaled));
    return schur_scale_.cwiseProduct(out);
  }

  bool factor_schur() {
    // M_ij = sum_b <A_i, W A_j W> = sum_b <G^† A_i G, G^† A_j G>, formed as a
    // Gram matrix of the scaled constraints so that it stays symmetric PSD.
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(m_, m_);
    for (int b = 0; b < nb_; ++b) {
      const Matrix& g = scaling_[b].g;
      const int n = p_.block_dims[b];
      Eigen::MatrixXcd stacked = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n) * n, m_);
      for (int j = 0; j < m_; ++j) {
        const Matrix& aj = p_.constraints[j].blocks[b];
        if (aj.size() == 0) continue;
        const Matrix t = g.adjoint() * aj * g;
        stacked.col(j) = Eigen::Map<const Eigen::VectorXcd>(t.data(), t.size());
      }
      m += (stacked.adjoint() * stacked).real();
    }
    // Symmetric diagonal equilibration; the entries of M span many orders of
    // magnitude near the boundary of the cone.
    schur_scale_ = m.diagonal().cwiseMax(std::numeric_limits<double>::min()).cwiseSqrt().cwiseInverse();
    m = schur_scale_.asDiagonal() * m * schur_scale_.asDiagonal();
    schur_llt_.compute(m);
    if (schur_llt_.info() != Eigen::Success) schur_ldlt_.compute(m);
    return m.allFinite();
  }

  std::pair<double, double> step_lengths(const Direction& d) const {
    double ap = std::numeric_limits<double>::infinity();
    double ad = std::numeric_limits<double>::infinity();
    for (int b = 0; b < nb_; ++b) {
      ap = std::min(ap, detail::max_step(chol_x_[b], d.dx[b]));
      ad = std::min(ad, detail::max_step(chol_z_[b], d.dz[b]));
    }
    return {ap, ad};
  }

  bool step(const RealVector& rp, const std::vector<Matrix>& rd, double mu, bool lagging, double& alpha_p,
            double& alpha_d) {
    scaling_.clear();
    chol_x_.clear();
    chol_z_.clear();
    for (int b = 0; b < nb_; ++b) {
      auto sc = detail::nt_scaling(x_[b], z_[b]);
      if (!sc) return false;
      scaling_.push_back(std::move(*sc));
      chol_x_.emplace_back(x_[b]);
      chol_z_.emplace_back(z_[b]);
    }
    if (!factor_schur()) return false;

    // Predictor (affine scaling): dX + W dZ W = -X.
    std::vector<Matrix> rc(nb_);
    for (int b = 0; b < nb_; ++b) rc[b] = -x_[b];
    const Direction aff = solve_direction(rc, rp, rd);
    auto [ap_max, ad_max] = step_lengths(aff);
    const double ap_aff = std::min(1.0, ap_max);
    const double ad_aff = std::min(1.0, ad_max);
    double xz_aff = 0.0;
    for (int b = 0; b < nb_; ++b) {
      xz_aff += inner(x_[b] + ap_aff * aff.dx[b], z_[b] + ad_aff * aff.dz[b]);
    }
    const double mu_aff = std::max(xz_aff, 0.0) / n_total_;
    double sigma = mu > 0.0 ? std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0) : 0.0;
    // Keep complementarity from reaching zero before the residuals do; once
    // the iterate hugs the boundary the steps collapse.
    if (lagging) sigma = std::max(sigma, kLaggingSigma);

    // Corrector in the scaled space where X and Z both equal diag(v).
    for (int b = 0; b < nb_; ++b) {
      const auto& sc = scaling_[b];
      const int n = p_.block_dims[b];
      const Matrix dxt = sc.g_inv * aff.dx[b] * sc.g_inv.adjoint();
      const Matrix dzt = sc.g.adjoint() * aff.dz[b] * sc.g;
      Matrix r = -hermitian_part(dxt * dzt);
      for (int i = 0; i < n; ++i) r(i, i) += sigma * mu - sc.v(i) * sc.v(i);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r(i, j) *= 2.0 / (sc.v(i) + sc.v(j));
      rc[b] = sc.g * r * sc.g.adjoint();
    }
    const Direction d = solve_direction(rc, rp, rd);
    std::tie(ap_max, ad_max) = step_lengths(d);
    alpha_p = std::min(1.0, s_.step_fraction * ap_max);
    alpha_d = std::min(1.0, s_.step_fraction * ad_max);
    if (!std::isfinite(alpha_p) || !std::isfinite(alpha_d)) return false;

    for (int b = 0; b < nb_; ++b) {
      x_[b] = hermitian_part(x_[b] + alpha_p * d.dx[b]);
      z_[b] = hermitian_part(z_[b] + alpha_d * d.dz[b]);
    }
    y_ += alpha_d * d.dy;
    return true;
  }

  const ConicProblem& p_;
  const SolverSettings& s_;
  int m_ = 0;
  int nb_ = 0;
  int n_total_ = 0;
  std::vector<Matrix> x_;
  std::vector<Matrix> z_;
  RealVector y_;
  std::vector<detail::NtScaling> scaling_;
  std::vector<Eigen::LLT<Matrix>> chol_x_;
  std::vector<Eigen::LLT<Matrix>> chol_z_;
  Eigen::LLT<Eigen::MatrixXd> schur_llt_;
  Eigen::LDLT<Eigen::MatrixXd> schur_ldlt_;
  RealVector schur_scale_;
};

inline ConicSolution solve_conic(const ConicProblem& p, const SolverSettings& s = {}) {
  return ConicSolver(p, s).solve();
}

}  // namespace rw
