#pragma once

// Reference values computed without the SDP solver: a grid-and-bisection
// search for qubit coherence weights and a small log-barrier Newton method
// for two-qubit swap asymmetry. Slow; meant for tests.

#include "rw/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rw::oracle {

/// Coherence weight of a qubit: smallest s with rho - (1 - s) diag(p, 1 - p) >= 0
/// for some p. Bisection on s to 1e-6, scan over p with step 1e-5.
inline double qubit_cw(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw std::domain_error("qubit_cw: qubit state required");
  const double a = rho(0, 0).real();
  const double c = rho(1, 1).real();
  const double b2 = std::norm(rho(0, 1));
  auto feasible = [&](double s) {
    const double t = 1.0 - s;
    constexpr int kSteps = 100000;
    for (int i = 0; i <= kSteps; ++i) {
      const double p = static_cast<double>(i) / kSteps;
      const double x = a - t * p;
      const double y = c - t * (1.0 - p);
      // smallest eigenvalue of [[x, b], [b*, y]]
      const double lmin = 0.5 * (x + y - std::sqrt((x - y) * (x - y) + 4.0 * b2));
      if (lmin >= -1e-12) return true;
    }
    return false;
  };
  double lo = 0.0;
  double hi = 1.0;
  if (feasible(lo)) return 0.0;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

namespace detail {

/// Real basis of the swap-symmetric Hermitian operators on two qubits:
/// Hermitian on sym = span(|00>, |11>, (|01> + |10>)/sqrt 2) plus a
/// multiple of the antisymmetric projector. Orthonormal under Re Tr[A^† B].
inline std::vector<Matrix> swap_symmetric_basis() {
  Matrix u = Matrix::Zero(4, 4);  // columns |00>, |11>, |s>, |a>
  u(0, 0) = 1.0;
  u(3, 1) = 1.0;
  u(1, 2) = u(2, 2) = M_SQRT1_2;
  u(1, 3) = M_SQRT1_2;
  u(2, 3) = -M_SQRT1_2;
  std::vector<Matrix> out;
  auto add = [&](const Matrix& h) { out.push_back(u * h * u.adjoint()); };
  for (int i = 0; i < 4; ++i) {
    Matrix h = Matrix::Zero(4, 4);
    h(i, i) = 1.0;
    add(h);
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      Matrix re = Matrix::Zero(4, 4);
      re(i, j) = re(j, i) = M_SQRT1_2;
      add(re);
      Matrix im = Matrix::Zero(4, 4);
      im(i, j) = Complex(0.0, M_SQRT1_2);
      im(j, i) = Complex(0.0, -M_SQRT1_2);
      add(im);
    }
  }
  return out;
}

/// F(c) = a0 + sum_j c_j a[j], required positive definite.
struct AffineLmi {
  Matrix a0;
  std::vector<Matrix> a;
};

inline Matrix evaluate(const AffineLmi& f, const RealVector& c) {
  Matrix m = f.a0;
  for (std::size_t j = 0; j < f.a.size(); ++j) m += c(static_cast<Eigen::Index>(j)) * f.a[j];
  return hermitian_part(m);
}

/// Maximises g.c over {c : F_k(c) > 0 for all k} with the log-det barrier
/// path: Newton centring for mu = 1, 0.2, 0.04, ... until the barrier gap
/// mu * sum dim(F_k) is below 1e-11. c must start strictly feasible.
inline RealVector barrier_maximise(const RealVector& g, const std::vector<AffineLmi>& lmis, RealVector c) {
  const auto n = c.size();
  int barrier_dim = 0;
  for (const auto& f : lmis) barrier_dim += static_cast<int>(f.a0.rows());
  auto all_pd = [&](const RealVector& x) {
    for (const auto& f : lmis) {
      Eigen::LLT<Matrix> llt(evaluate(f, x));
      if (llt.info() != Eigen::Success) return false;
    }
    return true;
  };
  auto merit = [&](const RealVector& x, double mu) {
    double v = g.dot(x);
    for (const auto& f : lmis) {
      Eigen::LLT<Matrix> llt(evaluate(f, x));
      v += 2.0 * mu * llt.matrixL().toDenseMatrix().diagonal().real().array().log().sum();
    }
    return v;
  };
  if (!all_pd(c)) throw std::domain_error("barrier_maximise: start is not strictly feasible");
  for (double mu = 1.0; mu * barrier_dim > 1e-11; mu *= 0.2) {
    for (int it = 0; it < 100; ++it) {
      RealVector grad = g;
      Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(n, n);
      for (const auto& f : lmis) {
        const Matrix inv = evaluate(f, c).inverse();
        std::vector<Matrix> t(f.a.size());
        for (std::size_t j = 0; j < f.a.size(); ++j) {
          t[j] = inv * f.a[j];
          grad(static_cast<Eigen::Index>(j)) += mu * t[j].trace().real();
        }
        for (Eigen::Index i = 0; i < n; ++i)
          for (Eigen::Index j = 0; j <= i; ++j) {
            const double h = -mu * (t[i] * t[j]).trace().real();
            hess(i, j) += h;
            if (i != j) hess(j, i) += h;
          }
      }
      const RealVector step = (-hess).ldlt().solve(grad);
      const double decrement = grad.dot(step);
      if (!(decrement > 1e-13 * mu)) break;
      double alpha = 1.0;
      const double m0 = merit(c, mu);
      while (alpha > 1e-12) {
        const RealVector trial = c + alpha * step;
        if (all_pd(trial) && merit(trial, mu) >= m0 + 0.25 * alpha * decrement) break;
        alpha *= 0.5;
      }
      if (alpha <= 1e-12) break;
      c += alpha * step;
    }
  }
  return c;
}

/// Least-squares coordinates of m in the span of `basis`.
inline RealVector coordinates(const std::vector<Matrix>& basis, const Matrix& m) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd gram(n, n);
  RealVector rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    rhs(i) = inner(basis[i], m);
    for (Eigen::Index j = 0; j < n; ++j) gram(i, j) = inner(basis[i], basis[j]);
  }
  return gram.ldlt().solve(rhs);
}

}  // namespace detail

/// Asymmetry weight under the swap of two qubits.
///
/// 1 - A_w = max Tr Sigma over symmetric Sigma with 0 <= Sigma <= rho.
/// A symmetric Sigma <= rho is supported on K = supp(rho) ∩ V supp(rho),
/// the largest swap-invariant subspace of the support, and for operators
/// on K the constraint Sigma <= rho reads S <= (Q^† rho^+ Q)^-1 in an
/// orthonormal basis Q of K.
inline double swap_aw(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw std::domain_error("swap_aw: two-qubit state required");
  Matrix v = Matrix::Zero(4, 4);
  v(0, 0) = v(3, 3) = v(1, 2) = v(2, 1) = 1.0;

  const EigenSystem es = eig_hermitian(rho.hermitian());
  Matrix support = Matrix::Zero(4, 4);
  Matrix pinv = Matrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) {
    if (es.values(i) <= 1e-12) continue;
    const Matrix p = es.vectors.col(i) * es.vectors.col(i).adjoint();
    support += p;
    pinv += p / es.values(i);
  }
  const EigenSystem both = eig_hermitian(HermitianMatrix(hermitian_part(0.5 * (support + v * support * v))));
  std::vector<int> keep;
  for (int i = 0; i < 4; ++i)
    if (both.values(i) > 1.0 - 1e-9) keep.push_back(i);
  const int k = static_cast<int>(keep.size());
  if (k == 0) return 1.0;
  Matrix q(4, k);
  for (int i = 0; i < k; ++i) q.col(i) = both.vectors.col(keep[i]);

  // Hermitian operators on K commuting with the swap restricted to K.
  const Matrix vk = q.adjoint() * v * q;
  std::vector<Matrix> sym;
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j) {
      for (Complex z : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
        if (i == j && z.imag() != 0.0) continue;
        Matrix e = Matrix::Zero(k, k);
        e(i, j) = z;
        e(j, i) = std::conj(z);
        Matrix t = hermitian_part(0.5 * (e + vk * e * vk.adjoint()));
        for (const auto& b : sym) t -= inner(b, t) * b;
        const double n = t.norm();
        if (n > 1e-9) sym.push_back(t / n);
      }
    }
  }

  const Matrix bound = hermitian_part(Matrix(q.adjoint() * pinv * q).inverse());
  const RealVector ident = detail::coordinates(sym, Matrix::Identity(k, k));
  const RealVector c0 = ident * (0.5 * eigenvalues(bound).minCoeff());

  RealVector g(static_cast<Eigen::Index>(sym.size()));
  std::vector<Matrix> neg(sym.size());
  for (std::size_t j = 0; j < sym.size(); ++j) {
    g(static_cast<Eigen::Index>(j)) = sym[j].trace().real();
    neg[j] = -sym[j];
  }
  const std::vector<detail::AffineLmi> lmis{{Matrix::Zero(k, k), sym}, {bound, neg}};
  const RealVector c = detail::barrier_maximise(g, lmis, c0);
  return std::clamp(1.0 - g.dot(c), 0.0, 1.0);
}

/// Robustness of asymmetry under the swap of two qubits:
/// 1 + A_R = min Tr Sigma over symmetric Sigma >= rho.
inline double swap_ar(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw std::domain_error("swap_ar: two-qubit state required");
  const auto sym = detail::swap_symmetric_basis();
  RealVector g(static_cast<Eigen::Index>(sym.size()));
  for (std::size_t j = 0; j < sym.size(); ++j) g(static_cast<Eigen::Index>(j)) = -sym[j].trace().real();
  const RealVector c0 = detail::coordinates(sym, 2.0 * Matrix::Identity(4, 4));
  const std::vector<detail::AffineLmi> lmis{{-rho.matrix(), sym}};
  const RealVector c = detail::barrier_maximise(g, lmis, c0);
  return std::max(-g.dot(c) - 1.0, 0.0);
}

}  // namespace rw::oracle
