#include "rw/harness.hpp"
#include "rw/measures.hpp"
#include "rw/oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace rw;
using harness::decomposition_error;
using harness::witness_error;

namespace {

constexpr double kPi = std::numbers::pi;

DensityMatrix qubit(double a, Complex b) {
  Matrix m(2, 2);
  m << a, b, std::conj(b), 1.0 - a;
  return DensityMatrix(m);
}

DensityMatrix ket(int d, int i) { return DensityMatrix::pure(basis_vector(d, i)); }

MeasureOptions sdp_only() {
  MeasureOptions o;
  o.pure_shortcut = false;
  return o;
}

}  // namespace

TEST(CoherenceWeight, Examples) {
  const auto diag = dephase(haar_random_mixed(3, 3, 1));
  const auto r0 = coherence_weight(diag);
  EXPECT_NEAR(r0.value, 0.0, 1e-7);
  EXPECT_TRUE(r0.is_free);

  const auto g = gisin(0.8, kPi / 3);
  const auto r = coherence_weight(g);
  EXPECT_NEAR(r.value, 0.8, 1e-6);
  EXPECT_LE(r.gap, 1e-7);
  EXPECT_LE(decomposition_error(g, r), 1e-6);
  EXPECT_LE(witness_error(g, r, Dephasing{}), 1e-6);

  const auto q = qubit(0.5, 0.3);
  EXPECT_NEAR(coherence_weight(q).value, oracle::qubit_cw(q), 1e-4);
}

TEST(CoherenceWeight, PureStates) {
  const auto plus = maximally_coherent(2);
  const auto s = coherence_weight(plus);
  EXPECT_TRUE(s.shortcut);
  EXPECT_EQ(s.value, 1.0);
  const auto full = coherence_weight(plus, sdp_only());
  EXPECT_FALSE(full.shortcut);
  EXPECT_NEAR(full.value, 1.0, 1e-6);
  ASSERT_TRUE(full.witness);
  EXPECT_TRUE(witness_evaluate(plus, *full.witness, Dephasing{}).feasible);
  // an incoherent pure state takes the solver path and is free
  const auto basis = coherence_weight(ket(3, 1));
  EXPECT_FALSE(basis.shortcut);
  EXPECT_NEAR(basis.value, 0.0, 1e-7);
}

TEST(CoherenceWeight, CertificatesOnRandomStates) {
  for (int d : {2, 3, 4, 5}) {
    for (int i = 0; i < 25; ++i) {
      const auto rho = haar_random_mixed(d, 1 + i % (d + 1), derive_seed(600 + d, i));
      const auto r = coherence_weight(rho);
      ASSERT_GE(r.value, 0.0);
      ASSERT_LE(r.value, 1.0);
      ASSERT_LE(r.gap, 1e-6);
      ASSERT_LE(decomposition_error(rho, r), 1e-6);
      ASSERT_LE(witness_error(rho, r, Dephasing{}), 1e-6);
      ASSERT_LE(l1_coherence(*r.free_state) + 0.0, 1e-6);
    }
  }
}

TEST(CoherenceWeight, QubitOracle) {
  for (int i = 0; i < 30; ++i) {
    const auto rho = haar_random_mixed(2, 1 + i % 3, derive_seed(700, i));
    ASSERT_NEAR(coherence_weight(rho, sdp_only()).value, oracle::qubit_cw(rho), 1e-4);
  }
  EXPECT_NEAR(oracle::qubit_cw(qubit(0.3, 0.0)), 0.0, 1e-9);
  EXPECT_NEAR(oracle::qubit_cw(maximally_coherent(2)), 1.0, 1e-4);
}

TEST(AsymmetryWeight, Examples) {
  const auto swap = rep_swap(2);
  for (double a : {0.0, 0.3, 0.9, 1.0}) EXPECT_NEAR(asymmetry_weight(werner(2, a), swap).value, 0.0, 1e-7);
  const auto k01 = asymmetry_weight(ket(4, 1), swap, sdp_only());
  EXPECT_NEAR(k01.value, 1.0, 1e-6);
  EXPECT_EQ(asymmetry_weight(ket(4, 1), swap).value, 1.0);
  const auto m = mix(0.5, singlet(), ket(4, 1));
  const auto r = asymmetry_weight(m, swap);
  EXPECT_NEAR(r.value, oracle::swap_aw(m), 1e-4);
  EXPECT_LE(decomposition_error(m, r), 1e-6);
  EXPECT_LE(witness_error(m, r, swap), 1e-6);
  EXPECT_THROW(asymmetry_weight(ket(3, 0), swap), std::domain_error);
}

TEST(AsymmetryWeight, ZeroExactlyForSymmetricStates) {
  const auto swap = rep_swap(2);
  for (int i = 0; i < 20; ++i) {
    const auto rho = haar_random_mixed(4, 4, derive_seed(800, i));
    const auto sym = group_average(rho, swap);
    EXPECT_TRUE(asymmetry_weight(sym, swap).is_free);
    EXPECT_FALSE(asymmetry_weight(rho, swap).is_free);
  }
}

TEST(AsymmetryWeight, CyclicRepMatchesCoherenceWeight) {
  for (int i = 0; i < 10; ++i) {
    const auto rho = haar_random_mixed(3, 3, derive_seed(900, i));
    EXPECT_NEAR(asymmetry_weight(rho, rep_cyclic(3, 3)).value, coherence_weight(rho).value, 1e-6);
  }
}

TEST(L1, Examples) {
  EXPECT_EQ(l1_coherence(DensityMatrix(HermitianMatrix::diagonal({0.2, 0.8}))), 0.0);
  for (int d : {2, 3, 5}) EXPECT_NEAR(l1_coherence(maximally_coherent(d)), d - 1.0, 1e-12);
  for (int d : {2, 3}) EXPECT_NEAR(l1_coherence(werner(d, 0.35)), 0.35, 1e-12);
}

TEST(RelEntropy, Examples) {
  EXPECT_NEAR(rel_entropy_coherence(DensityMatrix(HermitianMatrix::diagonal({0.2, 0.8}))), 0.0, 1e-12);
  for (int d : {2, 3, 4}) EXPECT_NEAR(rel_entropy_coherence(maximally_coherent(d)), std::log(d), 1e-9);
  const auto psi = haar_random_pure(4, 3);
  EXPECT_NEAR(rel_entropy_coherence(psi), von_neumann_entropy(dephase(psi)), 1e-9);

  const auto swap = rep_swap(2);
  EXPECT_NEAR(rel_entropy_asymmetry(werner(2, 0.4), swap), 0.0, 1e-9);
  EXPECT_NEAR(rel_entropy_asymmetry(ket(4, 1), swap), std::log(2.0), 1e-9);
  EXPECT_NEAR(nats_to_bits(std::log(2.0)), 1.0, 1e-15);
}

TEST(Robustness, Examples) {
  EXPECT_NEAR(robustness_coherence(DensityMatrix::maximally_mixed(3)).value, 0.0, 1e-7);
  EXPECT_NEAR(robustness_coherence(werner(3, 0.75)).value, 0.75, 1e-6);
  for (int d : {2, 4}) {
    for (int i = 0; i < 10; ++i) {
      const auto rho = generalized_x(random_x_spec(d, derive_seed(1000 + d, i)));
      ASSERT_NEAR(robustness_coherence(rho).value, l1_coherence(rho), 1e-6);
    }
  }
}

TEST(Robustness, CertificatesAndBounds) {
  for (int i = 0; i < 30; ++i) {
    const int d = 2 + i % 4;
    const auto rho = haar_random_mixed(d, d, derive_seed(1100, i));
    const auto r = robustness_coherence(rho);
    ASSERT_LE(r.value, l1_coherence(rho) + 1e-6);
    ASSERT_LE(decomposition_error(rho, r), 1e-6);
    ASSERT_TRUE(r.witness);
    ASSERT_NEAR(trace_product(rho.hermitian(), *r.witness), r.value, 1e-6);
    ASSERT_LE(eigenvalues(dephase(r.witness->matrix())).maxCoeff(), 1e-8);
    ASSERT_GE(min_eigenvalue(*r.witness), -1.0 - 1e-8);
  }
}

TEST(RobustnessAsymmetry, ExamplesAndOracle) {
  const auto swap = rep_swap(2);
  EXPECT_NEAR(robustness_asymmetry(werner(2, 0.6), swap).value, 0.0, 1e-7);
  const auto k01 = ket(4, 1);
  EXPECT_NEAR(robustness_asymmetry(k01, swap).value, oracle::swap_ar(k01), 1e-4);
  for (int i = 0; i < 10; ++i) {
    const auto rho = haar_random_mixed(4, 1 + i % 4, derive_seed(1200, i));
    const double aw = asymmetry_weight(rho, swap).value;
    ASSERT_LE(robustness_asymmetry(rho, swap).value, 3.0 * aw + 1e-6);
    ASSERT_LE(rel_entropy_asymmetry(rho, swap), std::log(4.0) * aw + 1e-6);
  }
}

TEST(HsBound, Examples) {
  const auto free = hs_lower_bound(DensityMatrix::maximally_mixed(3), Dephasing{});
  EXPECT_EQ(free.sharp, 0.0);
  EXPECT_EQ(free.loose, 0.0);
  const auto plus = hs_lower_bound(maximally_coherent(2), Dephasing{});
  EXPECT_NEAR(plus.sharp, 0.5, 1e-12);
  EXPECT_NEAR(plus.loose, 0.5, 1e-12);
  for (int i = 0; i < 100; ++i) {
    const auto rho = haar_random_mixed(3, 3, derive_seed(1300, i));
    const auto b = hs_lower_bound(rho, Dephasing{});
    ASSERT_GE(b.sharp, b.loose);
    ASSERT_GE(b.loose, 0.0);
    ASSERT_LE(b.sharp, coherence_weight(rho).value + 1e-6);
  }
}

TEST(Witness, HilbertSchmidtWitnessIsFeasible) {
  for (int i = 0; i < 50; ++i) {
    const auto rho = haar_random_mixed(3, 2, derive_seed(1400, i));
    const Matrix w = (rho.matrix() - dephase(rho.matrix())) / norms(rho.hermitian()).opnorm;
    const auto c = witness_evaluate(rho, HermitianMatrix(w), Dephasing{});
    ASSERT_TRUE(c.feasible);
    ASSERT_NEAR(c.value, hs_lower_bound(rho, Dephasing{}).sharp, 1e-12);
  }
}

TEST(Witness, NegatedSwapOnSinglet) {
  // Tr[singlet (-V)] = 1, but the singlet is swap-symmetric and the twirl
  // of -V is -V itself, which has eigenvalue +1 on the antisymmetric
  // subspace, so -V is not a feasible asymmetry witness.
  const auto swap = rep_swap(2);
  const HermitianMatrix minus_v(-swap_operator(2));
  const auto c = witness_evaluate(singlet(), minus_v, swap);
  EXPECT_NEAR(c.value, 1.0, 1e-12);
  EXPECT_FALSE(c.feasible);
  EXPECT_LE((group_average(minus_v, swap).matrix() - minus_v.matrix()).norm(), 1e-12);
  EXPECT_NEAR(asymmetry_weight(singlet(), swap).value, 0.0, 1e-7);
}

TEST(Witness, SolverWitnessesAreFeasible) {
  const auto swap = rep_swap(2);
  for (int i = 0; i < 20; ++i) {
    const auto rho = haar_random_mixed(4, 2, derive_seed(1500, i));
    const auto r = asymmetry_weight(rho, swap);
    const auto c = witness_evaluate(rho, *r.witness, swap);
    ASSERT_TRUE(c.feasible);
    ASSERT_NEAR(c.value, r.value, 1e-6);
  }
}

TEST(PhaseCondition, Examples) {
  for (int i = 0; i < 20; ++i) {
    const auto rho = haar_random_mixed(2, 2, derive_seed(1600, i));
    const auto phases = prop6_applicable(rho);
    ASSERT_TRUE(phases);
    ASSERT_GE(coherence_weight(rho).value, l1_coherence(rho) - 1e-6);
  }
  for (int i = 0; i < 20; ++i) {
    const auto rho = generalized_x(random_x_spec(4, derive_seed(1700, i)));
    ASSERT_TRUE(prop6_applicable(rho));
    ASSERT_GE(coherence_weight(rho).value, l1_coherence(rho) - 1e-6);
  }
  // all-positive off-diagonals on a triangle cannot all be made negative
  EXPECT_FALSE(prop6_applicable(maximally_coherent(3)));
  const auto phases = prop6_applicable(werner(2, 0.5));
  ASSERT_TRUE(phases);
}

TEST(Oracle, SwapWeightHandPicked) {
  const auto swap = rep_swap(2);
  const std::vector<DensityMatrix> states{ket(4, 1), mix(0.5, singlet(), ket(4, 1)), haar_random_mixed(4, 4, 42),
                                          haar_random_mixed(4, 2, 43)};
  for (const auto& rho : states) {
    EXPECT_NEAR(asymmetry_weight(rho, swap, sdp_only()).value, oracle::swap_aw(rho), 1e-4);
    EXPECT_NEAR(robustness_asymmetry(rho, swap).value, oracle::swap_ar(rho), 1e-4);
  }
  EXPECT_THROW(oracle::swap_aw(DensityMatrix::maximally_mixed(3)), std::domain_error);
}

TEST(Errors, SolverErrorCarriesStatus) {
  MeasureOptions o;
  o.solver.max_iterations = 1;
  try {
    coherence_weight(haar_random_mixed(3, 3, 5), o);
    FAIL() << "expected SolverError";
  } catch (const SolverError& e) {
    EXPECT_EQ(e.status(), SolveStatus::max_iter);
  }
}
