#pragma once

// Dense complex-Hermitian linear algebra used throughout the library.
//
// Subsystem convention: in a Kronecker product A ⊗ B the first factor is
// the slow (major) index, i.e. basis state |i j> has flat index i * dim(B) + j.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

namespace rw {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kTraceTol = 1e-9;

/// Real Frobenius inner product <A, B> = Re Tr[A^† B].
inline double inner(const Matrix& a, const Matrix& b) {
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

/// Hermitian part (A + A^†) / 2.
inline Matrix hermitian_part(const Matrix& a) { return (a + a.adjoint()) * 0.5; }

/// Dense complex self-adjoint matrix. Construction validates Hermiticity to
/// an absolute tolerance and then stores the exact Hermitian part.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const Matrix& m, double tol = kHermitianTol) {
    if (m.rows() < 1 || m.rows() != m.cols()) {
      throw std::domain_error("HermitianMatrix: matrix must be square with dim >= 1");
    }
    const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 2.0 * tol) {
      throw std::domain_error("HermitianMatrix: input is not Hermitian (max |A - A^†| = " +
                              std::to_string(asym) + ")");
    }
    m_ = hermitian_part(m);
  }

  static HermitianMatrix zero(int d) { return HermitianMatrix(Matrix::Zero(d, d)); }
  static HermitianMatrix identity(int d) { return HermitianMatrix(Matrix::Identity(d, d)); }
  static HermitianMatrix diagonal(std::span<const double> diag) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(diag.size()),
                            static_cast<Eigen::Index>(diag.size()));
    for (std::size_t i = 0; i < diag.size(); ++i) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = diag[i];
    }
    return HermitianMatrix(m);
  }
  static HermitianMatrix diagonal(std::initializer_list<double> diag) {
    return diagonal(std::span<const double>(diag.begin(), diag.size()));
  }
  /// Outer product |v><v| (not normalised).
  static HermitianMatrix projector(const Vector& v) { return HermitianMatrix(v * v.adjoint()); }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }
  double trace() const { return m_.trace().real(); }

  HermitianMatrix operator+(const HermitianMatrix& o) const { return HermitianMatrix(m_ + o.m_); }
  HermitianMatrix operator-(const HermitianMatrix& o) const { return HermitianMatrix(m_ - o.m_); }
  HermitianMatrix operator-() const { return HermitianMatrix(-m_); }
  HermitianMatrix operator*(double s) const { return HermitianMatrix(m_ * s); }
  friend HermitianMatrix operator*(double s, const HermitianMatrix& h) { return h * s; }

  /// U H U^† for a square U of matching dimension.
  HermitianMatrix conjugated(const Matrix& u) const {
    return HermitianMatrix(hermitian_part(u * m_ * u.adjoint()));
  }

 private:
  Matrix m_;
};

/// Tr[A B] for Hermitian A, B (always real).
inline double trace_product(const HermitianMatrix& a, const HermitianMatrix& b) {
  return inner(a.matrix(), b.matrix());
}

inline double frobenius_distance(const HermitianMatrix& a, const HermitianMatrix& b) {
  return (a.matrix() - b.matrix()).norm();
}

struct EigenSystem {
  RealVector values;  // ascending
  Matrix vectors;     // orthonormal columns
};

/// Householder tridiagonalisation followed by implicit-shift QL/QR iterations.
inline EigenSystem eig_hermitian(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
  if (es.info() != Eigen::Success) {
    throw std::domain_error("eig_hermitian: eigensolver did not converge");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

inline RealVector eigenvalues(const Matrix& hermitian) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(hermitian, Eigen::EigenvaluesOnly).eigenvalues();
}

inline RealVector eigenvalues(const HermitianMatrix& h) { return eigenvalues(h.matrix()); }

inline double min_eigenvalue(const HermitianMatrix& h) { return eigenvalues(h).minCoeff(); }
inline double max_eigenvalue(const HermitianMatrix& h) { return eigenvalues(h).maxCoeff(); }

inline bool is_psd(const HermitianMatrix& h, double tol = kPsdTol) {
  return min_eigenvalue(h) >= -tol;
}

/// Hermitian matrix with the additional invariants of a quantum state:
/// eigenvalues >= -1e-9 and unit trace within 1e-9.
class DensityMatrix {
 public:
  explicit DensityMatrix(HermitianMatrix h) : h_(std::move(h)) {
    if (std::abs(h_.trace() - 1.0) > kTraceTol) {
      throw std::domain_error("DensityMatrix: trace " + std::to_string(h_.trace()) + " != 1");
    }
    const double lmin = min_eigenvalue(h_);
    if (lmin < -kPsdTol) {
      throw std::domain_error("DensityMatrix: negative eigenvalue " + std::to_string(lmin));
    }
  }
  explicit DensityMatrix(const Matrix& m) : DensityMatrix(HermitianMatrix(m)) {}

  /// |psi><psi| / <psi|psi>.
  static DensityMatrix pure(const Vector& psi) {
    const double n2 = psi.squaredNorm();
    if (!(n2 > 0.0)) throw std::domain_error("DensityMatrix::pure: zero vector");
    return DensityMatrix(HermitianMatrix(psi * psi.adjoint() / n2));
  }

  static DensityMatrix maximally_mixed(int d) {
    return DensityMatrix(HermitianMatrix(Matrix::Identity(d, d) / static_cast<double>(d)));
  }

  /// Nearest state obtained by clipping negative eigenvalues and renormalising.
  /// Used for certificates that are PSD only up to solver residuals.
  static DensityMatrix project(const HermitianMatrix& h) {
    auto es = eig_hermitian(h);
    RealVector lam = es.values.cwiseMax(0.0);
    const double tr = lam.sum();
    if (!(tr > 0.0)) return maximally_mixed(h.dim());
    lam /= tr;
    Matrix m = es.vectors * lam.cast<Complex>().asDiagonal() * es.vectors.adjoint();
    return DensityMatrix(HermitianMatrix(hermitian_part(m), 1e-9));
  }

  int dim() const { return h_.dim(); }
  const HermitianMatrix& hermitian() const { return h_; }
  const Matrix& matrix() const { return h_.matrix(); }
  Complex operator()(int i, int j) const { return h_(i, j); }
  double purity() const { return trace_product(h_, h_); }

  operator const HermitianMatrix&() const { return h_; }  // NOLINT(google-explicit-constructor)

 private:
  HermitianMatrix h_;
};

/// Convex combination p a + (1 - p) b.
inline DensityMatrix mix(double p, const DensityMatrix& a, const DensityMatrix& b) {
  if (p < 0.0 || p > 1.0) throw std::domain_error("mix: weight outside [0, 1]");
  return DensityMatrix(HermitianMatrix(p * a.matrix() + (1.0 - p) * b.matrix()));
}

/// S(rho) = -sum lambda ln lambda in nats; eigenvalues in [-1e-9, 0] count as 0.
inline double von_neumann_entropy(const DensityMatrix& rho) {
  double s = 0.0;
  for (double lam : eigenvalues(rho.hermitian())) {
    if (lam > kPsdTol) s -= lam * std::log(lam);
  }
  return std::max(s, 0.0);
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix(kron(a.matrix(), b.matrix()));
}

inline DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(kron(a.hermitian(), b.hermitian()));
}

struct BipartiteDims {
  int first;
  int second;
};

enum class Subsystem { first, second };

/// Reduced state on `keep`, tracing out the other factor.
inline DensityMatrix partial_trace(const DensityMatrix& rho, BipartiteDims dims, Subsystem keep) {
  const int d1 = dims.first;
  const int d2 = dims.second;
  if (d1 < 1 || d2 < 1 || rho.dim() != d1 * d2) {
    throw std::domain_error("partial_trace: dimension mismatch");
  }
  const Matrix& m = rho.matrix();
  Matrix out;
  if (keep == Subsystem::first) {
    out = Matrix::Zero(d1, d1);
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d1; ++j)
        for (int k = 0; k < d2; ++k) out(i, j) += m(i * d2 + k, j * d2 + k);
  } else {
    out = Matrix::Zero(d2, d2);
    for (int i = 0; i < d2; ++i)
      for (int j = 0; j < d2; ++j)
        for (int k = 0; k < d1; ++k) out(i, j) += m(k * d2 + i, k * d2 + j);
  }
  return DensityMatrix(HermitianMatrix(hermitian_part(out), 1e-9));
}

struct Norms {
  double hs2;     // Tr[H^† H]
  double opnorm;  // max |lambda|
};

inline Norms norms(const HermitianMatrix& h) {
  const RealVector lam = eigenvalues(h);
  return {h.matrix().squaredNorm(), lam.cwiseAbs().maxCoeff()};
}

}  // namespace rw
