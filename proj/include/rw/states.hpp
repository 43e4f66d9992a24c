#pragma once

// State families, finite unitary representations, free projections and
// seeded random sampling.

#include "rw/linalg.hpp"
#include "rw/random.hpp"

#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace rw {

inline constexpr double kUnitaryTol = 1e-9;

/// Finite unitary representation {U_g}: unitary elements, contains the
/// identity, closed under products.
class UnitaryRep {
 public:
  explicit UnitaryRep(std::vector<Matrix> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) throw std::domain_error("UnitaryRep: no elements");
    const auto d = elements_.front().rows();
    if (d < 1) throw std::domain_error("UnitaryRep: empty matrices");
    const Matrix id = Matrix::Identity(d, d);
    bool has_identity = false;
    for (const auto& u : elements_) {
      if (u.rows() != d || u.cols() != d) throw std::domain_error("UnitaryRep: dimension mismatch");
      if ((u.adjoint() * u - id).norm() > kUnitaryTol) {
        throw std::domain_error("UnitaryRep: element is not unitary");
      }
      has_identity = has_identity || (u - id).norm() <= kUnitaryTol;
    }
    if (!has_identity) throw std::domain_error("UnitaryRep: identity missing");
    for (const auto& a : elements_) {
      for (const auto& b : elements_) {
        const Matrix ab = a * b;
        const bool found = std::any_of(elements_.begin(), elements_.end(), [&](const Matrix& c) {
          return (ab - c).norm() <= kUnitaryTol;
        });
        if (!found) throw std::domain_error("UnitaryRep: not closed under products");
      }
    }
  }

  int dim() const { return static_cast<int>(elements_.front().rows()); }
  std::size_t size() const { return elements_.size(); }
  const std::vector<Matrix>& elements() const { return elements_; }

 private:
  std::vector<Matrix> elements_;
};

/// Kraus operators {K_i} with sum K_i^† K_i = I.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<Matrix> ops) : ops_(std::move(ops)) {
    if (ops_.empty()) throw std::domain_error("KrausChannel: no operators");
    const auto d = ops_.front().cols();
    Matrix sum = Matrix::Zero(d, d);
    for (const auto& k : ops_) {
      if (k.cols() != d || k.rows() != ops_.front().rows()) {
        throw std::domain_error("KrausChannel: operator dimension mismatch");
      }
      sum += k.adjoint() * k;
    }
    if ((sum - Matrix::Identity(d, d)).norm() > kUnitaryTol) {
      throw std::domain_error("KrausChannel: completeness relation violated");
    }
  }

  const std::vector<Matrix>& operators() const { return ops_; }
  std::size_t size() const { return ops_.size(); }
  int input_dim() const { return static_cast<int>(ops_.front().cols()); }

  struct Branch {
    double probability;                 // p_i = Tr[K_i rho K_i^†]
    std::optional<DensityMatrix> state;  // K_i rho K_i^† / p_i, absent when p_i ~ 0
  };

  Branch branch(const DensityMatrix& rho, std::size_t i) const {
    const Matrix out = ops_.at(i) * rho.matrix() * ops_.at(i).adjoint();
    const double p = out.trace().real();
    if (p <= 1e-12) return {std::max(p, 0.0), std::nullopt};
    return {p, DensityMatrix(HermitianMatrix(hermitian_part(out / p), 1e-9))};
  }

  DensityMatrix apply(const DensityMatrix& rho) const {
    Matrix out = Matrix::Zero(ops_.front().rows(), ops_.front().rows());
    for (const auto& k : ops_) out += k * rho.matrix() * k.adjoint();
    return DensityMatrix(HermitianMatrix(hermitian_part(out), 1e-9));
  }

 private:
  std::vector<Matrix> ops_;
};

/// Generalised X state: diagonal plus anti-diagonal entries rho(k, d-1-k), k < d/2.
struct XStateSpec {
  int dim = 0;
  std::vector<double> diagonal;
  std::vector<Complex> anti_diagonal;
};

// Free projections: dephasing onto the reference basis, or a group twirl.
struct Dephasing {};
using FreeSet = std::variant<Dephasing, UnitaryRep>;

inline Matrix dephase(const Matrix& m) {
  Matrix out = Matrix::Zero(m.rows(), m.cols());
  out.diagonal() = m.diagonal();
  return out;
}

inline HermitianMatrix dephase(const HermitianMatrix& h) { return HermitianMatrix(dephase(h.matrix())); }

inline DensityMatrix dephase(const DensityMatrix& rho) {
  return DensityMatrix(dephase(rho.hermitian()));
}

/// (1/|G|) sum_g U_g H U_g^†.
inline Matrix group_average(const Matrix& h, const UnitaryRep& rep) {
  if (h.rows() != rep.dim()) throw std::domain_error("group_average: dimension mismatch");
  Matrix out = Matrix::Zero(h.rows(), h.cols());
  for (const auto& u : rep.elements()) out += u * h * u.adjoint();
  return out / static_cast<double>(rep.size());
}

inline HermitianMatrix group_average(const HermitianMatrix& h, const UnitaryRep& rep) {
  return HermitianMatrix(hermitian_part(group_average(h.matrix(), rep)));
}

inline DensityMatrix group_average(const DensityMatrix& rho, const UnitaryRep& rep) {
  return DensityMatrix(group_average(rho.hermitian(), rep));
}

inline Matrix free_projection(const FreeSet& free, const Matrix& m) {
  if (const auto* rep = std::get_if<UnitaryRep>(&free)) return group_average(m, *rep);
  return dephase(m);
}

inline HermitianMatrix free_projection(const FreeSet& free, const HermitianMatrix& h) {
  return HermitianMatrix(hermitian_part(free_projection(free, h.matrix())));
}

inline DensityMatrix free_projection(const FreeSet& free, const DensityMatrix& rho) {
  return DensityMatrix(free_projection(free, rho.hermitian()));
}

inline Vector basis_vector(int d, int i) {
  Vector v = Vector::Zero(d);
  v(i) = 1.0;
  return v;
}

/// Swap F = sum_ij |ij><ji| on C^d ⊗ C^d.
inline Matrix swap_operator(int d) {
  Matrix f = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) f(i * d + j, j * d + i) = 1.0;
  return f;
}

/// (|01> - |10>)/sqrt(2) projector on two qubits.
inline DensityMatrix singlet() {
  Vector v = Vector::Zero(4);
  v(1) = M_SQRT1_2;
  v(2) = -M_SQRT1_2;
  return DensityMatrix::pure(v);
}

/// |psi+><psi+| with psi+ = sum_j |j> / sqrt(d).
inline DensityMatrix maximally_coherent(int d) {
  if (d < 1) throw std::domain_error("maximally_coherent: d must be >= 1");
  return DensityMatrix(HermitianMatrix(Matrix::Constant(d, d, 1.0 / d)));
}

/// alpha (I - F)/(d(d-1)) + (1 - alpha) I/d^2 on C^d ⊗ C^d.
inline DensityMatrix werner(int d, double alpha) {
  if (d < 2) throw std::domain_error("werner: d must be >= 2");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::domain_error("werner: alpha outside [0, 1]");
  const int n = d * d;
  const Matrix id = Matrix::Identity(n, n);
  const Matrix m = alpha * (id - swap_operator(d)) / static_cast<double>(d * (d - 1)) +
                   (1.0 - alpha) * id / static_cast<double>(n);
  return DensityMatrix(HermitianMatrix(m));
}

/// lambda |psi(theta)><psi(theta)| + (1 - lambda) sigma0 with
/// psi(theta) = sin(theta)|01> - cos(theta)|10>, sigma0 = (|00><00| + |11><11|)/2.
inline DensityMatrix gisin(double lambda, double theta) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::domain_error("gisin: lambda outside [0, 1]");
  Vector psi = Vector::Zero(4);
  psi(1) = std::sin(theta);
  psi(2) = -std::cos(theta);
  Matrix m = lambda * psi * psi.adjoint();
  m(0, 0) += 0.5 * (1.0 - lambda);
  m(3, 3) += 0.5 * (1.0 - lambda);
  return DensityMatrix(HermitianMatrix(m));
}

inline DensityMatrix generalized_x(const XStateSpec& spec) {
  const int d = spec.dim;
  if (d < 1 || static_cast<int>(spec.diagonal.size()) != d ||
      static_cast<int>(spec.anti_diagonal.size()) != d / 2) {
    throw std::domain_error("generalized_x: malformed spec");
  }
  Matrix m = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    if (spec.diagonal[k] < -kPsdTol) throw std::domain_error("generalized_x: negative diagonal");
    m(k, k) = spec.diagonal[k];
  }
  for (int k = 0; k < d / 2; ++k) {
    const int kk = d - 1 - k;
    const Complex c = spec.anti_diagonal[k];
    if (std::norm(c) > spec.diagonal[k] * spec.diagonal[kk] + kPsdTol) {
      throw std::domain_error("generalized_x: 2x2 block is not PSD");
    }
    m(k, kk) = c;
    m(kk, k) = std::conj(c);
  }
  return DensityMatrix(HermitianMatrix(m));
}

/// Random valid X-state spec: Dirichlet-like diagonal, each anti-diagonal
/// entry a uniform fraction of its PSD bound with a uniform phase.
inline XStateSpec random_x_spec(int d, std::uint64_t seed) {
  Xoshiro256 rng(seed);
  XStateSpec spec{d, std::vector<double>(d), std::vector<Complex>(d / 2)};
  double total = 0.0;
  for (auto& p : spec.diagonal) {
    p = -std::log(1.0 - rng.uniform());
    total += p;
  }
  for (auto& p : spec.diagonal) p /= total;
  for (int k = 0; k < d / 2; ++k) {
    const double bound = std::sqrt(spec.diagonal[k] * spec.diagonal[d - 1 - k]);
    spec.anti_diagonal[k] = std::polar(bound * rng.uniform(), 2.0 * std::numbers::pi * rng.uniform());
  }
  return spec;
}

inline DensityMatrix haar_random_pure(int d, Xoshiro256& rng) {
  if (d < 1) throw std::domain_error("haar_random_pure: d must be >= 1");
  return DensityMatrix::pure(haar_unitary(d, rng).col(0));
}

inline DensityMatrix haar_random_pure(int d, std::uint64_t seed) {
  Xoshiro256 rng(seed);
  return haar_random_pure(d, rng);
}

/// Reduced state of a Haar pure state on C^d ⊗ C^d_env (induced measure).
inline DensityMatrix haar_random_mixed(int d, int d_env, Xoshiro256& rng) {
  if (d < 1 || d_env < 1) throw std::domain_error("haar_random_mixed: dimensions must be >= 1");
  const auto joint = haar_random_pure(d * d_env, rng);
  if (d_env == 1) return joint;
  return partial_trace(joint, {d, d_env}, Subsystem::first);
}

inline DensityMatrix haar_random_mixed(int d, int d_env, std::uint64_t seed) {
  Xoshiro256 rng(seed);
  return haar_random_mixed(d, d_env, rng);
}

/// S_2 acting on C^d ⊗ C^d: {I, F}.
inline UnitaryRep rep_swap(int d) {
  if (d < 2) throw std::domain_error("rep_swap: d must be >= 2");
  return UnitaryRep({Matrix::Identity(d * d, d * d), swap_operator(d)});
}

/// Z_n acting by U_k = diag(exp(2 pi i k j / n))_j. Its twirl is the
/// dephasing map whenever n >= d.
inline UnitaryRep rep_cyclic(int d, int n) {
  if (d < 1 || n < 2) throw std::domain_error("rep_cyclic: need d >= 1 and n >= 2");
  std::vector<Matrix> els;
  els.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    Matrix u = Matrix::Zero(d, d);
    for (int j = 0; j < d; ++j) u(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * k * j / n);
    els.push_back(std::move(u));
  }
  return UnitaryRep(std::move(els));
}

/// k Kraus operators K_i = sum_j c_ij |pi_i(j)><j| with random permutations
/// pi_i and complex weights normalised per column, so every K_i maps
/// incoherent states to incoherent states.
inline KrausChannel random_incoherent_kraus(int d, int k, std::uint64_t seed) {
  if (d < 1 || k < 1) throw std::domain_error("random_incoherent_kraus: need d, k >= 1");
  Xoshiro256 rng(seed);
  const Matrix weights = complex_gaussian(k, d, rng);
  std::vector<Matrix> ops;
  ops.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    std::vector<int> perm(static_cast<std::size_t>(d));
    std::iota(perm.begin(), perm.end(), 0);
    for (int j = d - 1; j > 0; --j) {
      const auto r = static_cast<int>(rng() % static_cast<std::uint64_t>(j + 1));
      std::swap(perm[j], perm[r]);
    }
    Matrix op = Matrix::Zero(d, d);
    for (int j = 0; j < d; ++j) {
      op(perm[j], j) = weights(i, j) / weights.col(j).norm();
    }
    ops.push_back(std::move(op));
  }
  return KrausChannel(std::move(ops));
}

/// k Kraus operators commuting with every element of `rep`: random Ginibre
/// matrices twirled into the commutant, then K_i = G_i S^{-1/2} with
/// S = sum G_i^† G_i (S commutes with the rep as well). Each branch
/// K_i . K_i^† is then covariant.
inline KrausChannel random_covariant_kraus(const UnitaryRep& rep, int k, std::uint64_t seed) {
  if (k < 1) throw std::domain_error("random_covariant_kraus: need k >= 1");
  const int d = rep.dim();
  Xoshiro256 rng(seed);
  std::vector<Matrix> ops;
  Matrix s = Matrix::Zero(d, d);
  for (int i = 0; i < k; ++i) {
    ops.push_back(group_average(complex_gaussian(d, d, rng), rep));
    s += ops.back().adjoint() * ops.back();
  }
  const auto es = eig_hermitian(HermitianMatrix(hermitian_part(s), 1e-9));
  const Matrix s_inv_sqrt =
      es.vectors * es.values.cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() * es.vectors.adjoint();
  for (auto& op : ops) op = op * s_inv_sqrt;
  return KrausChannel(std::move(ops));
}

}  // namespace rw
