#pragma once

// Coherence and asymmetry quantifiers with their optimality certificates.

#include "rw/sdp.hpp"
#include "rw/states.hpp"

#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rw {

enum class MeasureKind { weight, robustness };

/// Value plus certificates.
///
/// Weights: rho = (1 - value) sigma* + value tau*, W* feasible
/// (P(W*) <= 0, W* <= I) with Tr[rho W*] = value.
/// Robustness: rho = (1 + value) sigma* - value tau*, W* satisfies
/// P(W*) <= 0, W* >= -I and Tr[rho W*] = value.
struct MeasureReport {
  MeasureKind kind = MeasureKind::weight;
  double value = 0.0;
  std::optional<HermitianMatrix> witness;
  std::optional<DensityMatrix> free_state;
  std::optional<DensityMatrix> residual_state;
  /// Largest duality gap of the solves, including the disagreement between
  /// the two weight encodings. Zero for closed-form shortcuts.
  double gap = 0.0;
  int iterations = 0;
  bool shortcut = false;
  bool is_free = false;
};

struct MeasureOptions {
  /// Weights of non-free pure states are exactly 1; skip the solver for them.
  bool pure_shortcut = true;
  SolverSettings solver;
};

/// Thrown when a solve does not reach a certified optimum.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, SolveStatus status)
      : std::runtime_error(what + ": solver status " + to_string(status)), status_(status) {}
  SolveStatus status() const { return status_; }

 private:
  SolveStatus status_;
};

inline constexpr double kFreeThreshold = 1e-7;
inline constexpr double kPureThreshold = 1e-10;
inline constexpr double kWitnessTol = 1e-8;

namespace detail {

inline void require_dim(const DensityMatrix& rho, const FreeSet& free, const char* who) {
  if (const auto* rep = std::get_if<UnitaryRep>(&free); rep && rep->dim() != rho.dim()) {
    throw std::domain_error(std::string(who) + ": dimension mismatch");
  }
}

inline SdpSolution solve_checked(const SdpProblem& p, const SolverSettings& s, const char* who) {
  SdpSolution sol = solve(p, s);
  if (sol.status != SolveStatus::optimal) throw SolverError(who, sol.status);
  return sol;
}

inline DensityMatrix normalised(const Matrix& m) {
  return DensityMatrix::project(HermitianMatrix(hermitian_part(m), 1e-6));
}

inline MeasureReport weight(const DensityMatrix& rho, const FreeSet& free, const MeasureOptions& opt,
                            const char* who) {
  require_dim(rho, free, who);
  const int d = rho.dim();
  const Matrix p_rho = free_projection(free, rho.matrix());
  MeasureReport r;
  r.kind = MeasureKind::weight;

  if (opt.pure_shortcut && rho.purity() > 1.0 - kPureThreshold &&
      (rho.matrix() - p_rho).norm() > kFreeThreshold) {
    r.value = 1.0;
    r.shortcut = true;
    r.free_state = normalised(p_rho);
    r.residual_state = rho;
    return r;
  }

  const auto* rep = std::get_if<UnitaryRep>(&free);
  const SdpProblem primal_form = rep ? encode_asymmetry_weight(rho, *rep) : encode_coherence_weight(rho);
  const SdpProblem witness_form =
      rep ? encode_asymmetry_weight_dual(rho, *rep) : encode_coherence_weight_dual(rho);
  const SdpSolution a = solve_checked(primal_form, opt.solver, who);
  const SdpSolution b = solve_checked(witness_form, opt.solver, who);

  r.value = std::clamp(b.primal_value, 0.0, 1.0);
  r.witness = HermitianMatrix(Matrix::Identity(d, d) - b.primal.matrix());
  r.gap = std::max({a.gap, b.gap, std::abs((1.0 - a.primal_value) - b.primal_value)});
  r.iterations = a.iterations + b.iterations;
  r.is_free = r.value <= kFreeThreshold;

  // sigma~ from the primal form: P(sigma~) <= rho.
  const Matrix free_part = free_projection(free, a.primal.matrix());
  const double mass = free_part.trace().real();
  r.free_state = mass > 1e-12 ? normalised(free_part) : normalised(p_rho);
  if (!r.is_free) {
    r.residual_state = 1.0 - mass > 1e-12 ? normalised(rho.matrix() - free_part) : rho;
  }
  return r;
}

inline MeasureReport robustness(const DensityMatrix& rho, const FreeSet& free,
                                const MeasureOptions& opt, const char* who) {
  require_dim(rho, free, who);
  const int d = rho.dim();
  const SdpSolution s = solve_checked(encode_robustness(rho, free), opt.solver, who);
  MeasureReport r;
  r.kind = MeasureKind::robustness;
  r.value = std::max(s.dual_value, 0.0);
  r.gap = s.gap;
  r.iterations = s.iterations;
  r.is_free = r.value <= kFreeThreshold;
  r.witness = HermitianMatrix(s.primal.matrix() - Matrix::Identity(d, d));
  // P(Y*) >= rho and Tr Y* = 1 + value.
  const Matrix cover = free_projection(free, s.dual.matrix());
  r.free_state = normalised(cover);
  if (!r.is_free) r.residual_state = normalised(cover - rho.matrix());
  return r;
}

}  // namespace detail

inline MeasureReport coherence_weight(const DensityMatrix& rho, const MeasureOptions& opt = {}) {
  return detail::weight(rho, Dephasing{}, opt, "coherence_weight");
}

inline MeasureReport asymmetry_weight(const DensityMatrix& rho, const UnitaryRep& rep,
                                      const MeasureOptions& opt = {}) {
  return detail::weight(rho, rep, opt, "asymmetry_weight");
}

/// Weight for either free set.
inline MeasureReport weight(const DensityMatrix& rho, const FreeSet& free, const MeasureOptions& opt = {}) {
  return detail::weight(rho, free, opt, "weight");
}

inline MeasureReport robustness_coherence(const DensityMatrix& rho, const MeasureOptions& opt = {}) {
  return detail::robustness(rho, Dephasing{}, opt, "robustness_coherence");
}

inline MeasureReport robustness_asymmetry(const DensityMatrix& rho, const UnitaryRep& rep,
                                          const MeasureOptions& opt = {}) {
  return detail::robustness(rho, rep, opt, "robustness_asymmetry");
}

inline MeasureReport robustness(const DensityMatrix& rho, const FreeSet& free,
                                const MeasureOptions& opt = {}) {
  return detail::robustness(rho, free, opt, "robustness");
}

/// Sum of |rho_ij| over i != j.
inline double l1_coherence(const DensityMatrix& rho) {
  const Matrix& m = rho.matrix();
  return m.cwiseAbs().sum() - m.diagonal().cwiseAbs().sum();
}

/// S(P(rho)) - S(rho) in nats.
inline double rel_entropy(const DensityMatrix& rho, const FreeSet& free) {
  detail::require_dim(rho, free, "rel_entropy");
  return std::max(von_neumann_entropy(free_projection(free, rho)) - von_neumann_entropy(rho), 0.0);
}

inline double rel_entropy_coherence(const DensityMatrix& rho) { return rel_entropy(rho, Dephasing{}); }

inline double rel_entropy_asymmetry(const DensityMatrix& rho, const UnitaryRep& rep) {
  return rel_entropy(rho, rep);
}

inline constexpr double nats_to_bits(double nats) { return nats / std::numbers::ln2; }

struct HsBound {
  double sharp;  // ||rho - P(rho)||_2^2 / ||rho||_inf
  double loose;  // ||rho - P(rho)||_2^2
};

inline HsBound hs_lower_bound(const DensityMatrix& rho, const FreeSet& free) {
  detail::require_dim(rho, free, "hs_lower_bound");
  const Matrix diff = rho.matrix() - free_projection(free, rho.matrix());
  const double hs2 = diff.squaredNorm();
  return {hs2 / norms(rho.hermitian()).opnorm, hs2};
}

struct WitnessCheck {
  double value;   // Tr[rho W]
  bool feasible;  // P(W) <= 1e-8 and W <= I + 1e-8
};

inline WitnessCheck witness_evaluate(const DensityMatrix& rho, const HermitianMatrix& w,
                                     const FreeSet& free) {
  detail::require_dim(rho, free, "witness_evaluate");
  if (w.dim() != rho.dim()) throw std::domain_error("witness_evaluate: dimension mismatch");
  const double p_max = eigenvalues(hermitian_part(free_projection(free, w.matrix()))).maxCoeff();
  const bool feasible = p_max <= kWitnessTol && max_eigenvalue(w) <= 1.0 + kWitnessTol;
  return {trace_product(rho.hermitian(), w), feasible};
}

/// Phases phi with e^{i(phi_j - phi_k)} rho_jk = -|rho_jk| for every nonzero
/// off-diagonal entry. Phases are propagated along a spanning forest of the
/// graph of nonzero entries and then checked on every edge; nullopt means
/// the propagated phases fail somewhere, not that no such phases exist.
inline std::optional<std::vector<double>> prop6_applicable(const DensityMatrix& rho,
                                                           double zero_tol = 1e-12,
                                                           double check_tol = 1e-9) {
  const int d = rho.dim();
  const Matrix& m = rho.matrix();
  std::vector<double> phi(static_cast<std::size_t>(d), 0.0);
  std::vector<bool> seen(static_cast<std::size_t>(d), false);
  std::vector<int> queue;
  for (int root = 0; root < d; ++root) {
    if (seen[root]) continue;
    seen[root] = true;
    queue.assign(1, root);
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const int j = queue[q];
      for (int k = 0; k < d; ++k) {
        if (seen[k] || std::abs(m(j, k)) <= zero_tol) continue;
        phi[k] = phi[j] + std::arg(m(j, k)) - std::numbers::pi;
        seen[k] = true;
        queue.push_back(k);
      }
    }
  }
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) {
      if (j == k || std::abs(m(j, k)) <= zero_tol) continue;
      const Complex rotated = std::polar(1.0, phi[j] - phi[k]) * m(j, k);
      if (std::abs(rotated + std::abs(m(j, k))) > check_tol) return std::nullopt;
    }
  }
  return phi;
}

}  // namespace rw
