#include <gtest/gtest.h>

#include <cmath>

#include "ctpower/control_power.hpp"
#include "ctpower/simkit.hpp"
#include "oracles.hpp"

using namespace ctpower;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

DensityMatrix phi_plus() { return DensityMatrix::from_pure(CVector{kInvSqrt2, 0.0, 0.0, kInvSqrt2}); }

ProtocolConfig small_budget(std::size_t samples = 20000) {
  ProtocolConfig cfg;
  cfg.mc_samples = samples;
  cfg.seed = 11;
  return cfg;
}

// sum_t p_t (2 + C_t)/3 on full density matrices: project the controllers,
// trace them out, then use f = (1 + C)/2 for the pure conditional pair.
double ct_objective_bruteforce(const PureState& psi, const Partition& p, const std::vector<CMatrix>& us) {
  const int n = psi.n_qubits();
  const CMatrix rho = oracle::projector(psi.amplitudes());
  const std::size_t m = p.controllers.size();
  double total = 0.0;
  for (std::size_t t = 0; t < (std::size_t{1} << m); ++t) {
    // Projector onto U_i^dagger|t_i> on every controller, identity elsewhere.
    CMatrix proj = CMatrix::identity(1);
    std::size_t c = 0;
    for (int q = 1; q <= n; ++q) {
      if (c < m && p.controllers[c] == q) {
        const std::size_t ti = (t >> (m - 1 - c)) & 1U;
        const CVector v = us[c].adjoint() * CVector::basis(2, ti);
        proj = kron(proj, oracle::projector(v));
        ++c;
      } else {
        proj = kron(proj, CMatrix::identity(2));
      }
    }
    const CMatrix post = proj * rho * proj;
    const CMatrix pair = oracle::partial_trace(post, n, {p.k, p.l});
    const double prob = pair.trace().real();
    if (prob < 1e-12) continue;
    // Rank one: recover the vector from the largest column.
    std::size_t best = 0;
    for (std::size_t col = 1; col < 4; ++col)
      if (pair(col, col).real() > pair(best, best).real()) best = col;
    CVector v(4);
    for (std::size_t r = 0; r < 4; ++r) v[r] = pair(r, best) / std::sqrt(pair(best, best).real() * prob);
    total += prob * (2.0 + oracle::pure_concurrence(v)) / 3.0;
  }
  return total;
}

}  // namespace

TEST(Teleport, PerfectChannelEveryOutcome) {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const CVector xi = haar_state(1, rng);
    EXPECT_NEAR(teleport_once(phi_plus(), xi, rng), 1.0, 1e-13);
  }
}

TEST(Teleport, MaximallyMixedChannelAveragesOneHalf) {
  const DensityMatrix mixed(CMatrix::diag({0.25, 0.25, 0.25, 0.25}));
  Rng rng(2);
  for (int i = 0; i < 20; ++i) EXPECT_NEAR(teleport_average(mixed.matrix(), haar_state(1, rng)), 0.5, 1e-14);
}

TEST(Teleport, AverageMatchesFullRegisterSimulation) {
  Rng rng(3);
  for (int i = 0; i < 30; ++i) {
    const auto rho = random_density_matrix(2, rng);
    const CVector xi = haar_state(1, rng);
    EXPECT_NEAR(teleport_average(rho.matrix(), xi), oracle::teleport_average(rho.matrix(), xi), 1e-13);
  }
}

TEST(Teleport, SingleShotsAverageToExactValue) {
  Rng rng(4);
  const auto rho = random_density_matrix(2, rng);
  const CVector xi = haar_state(1, rng);
  double acc = 0.0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    const double f = teleport_once(rho, xi, rng);
    ASSERT_GE(f, -1e-12);
    ASSERT_LE(f, 1.0 + 1e-12);
    acc += f;
  }
  EXPECT_NEAR(acc / n, teleport_average(rho.matrix(), xi), 5e-3);
}

TEST(McTeleportation, PerfectChannel) {
  const auto est = mc_teleportation_fidelity(phi_plus(), small_budget(5000));
  EXPECT_NEAR(est.mean, 1.0, 1e-12);
  EXPECT_LT(est.stderr_of_mean, 1e-12);
}

TEST(McTeleportation, GhzPairReachesClassicalBound) {
  const auto rho = make_ghz(3, kInvSqrt2, kInvSqrt2).reduced({2, 3});
  const auto est = mc_teleportation_fidelity(rho, small_budget());
  EXPECT_NEAR(est.design_fidelity, 2.0 / 3.0, 1e-9);
  EXPECT_NEAR(est.mean, 2.0 / 3.0, 3.0 * est.stderr_of_mean + 1e-12);
}

TEST(McTeleportation, StandardWPair) {
  // lambda0 = 0, lambda_i = 1/sqrt3: (2/3 + sqrt(A_j) + 3)/6 with sqrt(A_j) = 1.
  const auto rho = make_uniform_w(3).reduced({1, 3});
  const auto est = mc_teleportation_fidelity(rho, small_budget());
  EXPECT_NEAR(est.design_fidelity, 7.0 / 9.0, 1e-9);
  EXPECT_NEAR(est.mean, 7.0 / 9.0, 3.0 * est.stderr_of_mean);
}

TEST(McTeleportation, RandomMixedStatesReachFullyEntangledFraction) {
  Rng rng(5);
  for (int i = 0; i < 6; ++i) {
    const auto rho = random_density_matrix(2, rng);
    const auto est = mc_teleportation_fidelity(rho, small_budget());
    const double optimal = fidelity_from_f(fully_entangled_fraction(rho));
    EXPECT_NEAR(est.design_fidelity, optimal, 1e-7);
    EXPECT_NEAR(est.mean, optimal, std::max(1e-3, 3.0 * est.stderr_of_mean));
    // The correlation-matrix value is an upper bound, tight when det T <= 0.
    EXPECT_LE(est.mean, fidelity_from_T(rho) + 3.0 * est.stderr_of_mean);
    if (correlation_matrix(rho).determinant() <= 0.0)
      EXPECT_NEAR(est.design_fidelity, fidelity_from_T(rho), 1e-7);
  }
}

TEST(McTeleportation, SeedReproducible) {
  Rng rng(6);
  const auto rho = random_density_matrix(2, rng);
  const auto a = mc_teleportation_fidelity(rho, small_budget(9000));
  const auto b = mc_teleportation_fidelity(rho, small_budget(9000));
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.stderr_of_mean, b.stderr_of_mean);
  EXPECT_EQ(a.samples, 9000u);
}

TEST(ProtocolConfig, Validation) {
  ProtocolConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.mc_samples = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.mc_samples = 1;
  cfg.optimizer.grid_resolution = 7;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(CtOracle, StandardGhzIsPerfect) {
  const auto psi = make_ghz(3, kInvSqrt2, kInvSqrt2);
  for (int j = 1; j <= 3; ++j) EXPECT_NEAR(ct_fidelity_oracle(psi, j, {}).fidelity, 1.0, 1e-6);
}

TEST(CtOracle, ProductStateStaysClassical) {
  const auto psi = make_ghz(3, 1.0, 0.0);
  for (int j = 1; j <= 3; ++j) EXPECT_NEAR(ct_fidelity_oracle(psi, j, {}).fidelity, 2.0 / 3.0, 1e-9);
}

TEST(CtOracle, RandomStatesMatchPartialTangle) {
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    const auto psi = random_pure_state(3, rng);
    for (int j = 1; j <= 3; ++j) {
      const auto r = ct_fidelity_oracle(psi, j, {});
      EXPECT_NEAR(r.fidelity, fct_three_qubit(psi, j), 1e-5);
      EXPECT_NEAR(r.probability_sum, 1.0, 1e-12);
      // Single controller: joint and product-of-marginal weights coincide.
      EXPECT_NEAR(r.product_weight_fidelity, r.fidelity, 1e-12);
      const Partition p = Partition::three_qubit(j);
      EXPECT_GE(r.fidelity, fidelity_from_T(psi.reduced({p.k, p.l})) - 1e-6);
      EXPECT_NEAR(r.fidelity, ct_objective_bruteforce(psi, p, r.unitaries), 1e-12);
    }
  }
}

TEST(CtOracle, ConditionalStatesAreValid) {
  Rng rng(8);
  const auto psi = random_pure_state(4, rng);
  const Partition p = Partition::from_workers(4, 1, 3);
  const std::vector<CMatrix> us{haar_unitary(2, rng), haar_unitary(2, rng)};
  double total = 0.0;
  for (const auto& o : controller_outcomes(psi, p, us)) {
    total += o.probability;
    ASSERT_EQ(o.worker_state.dim(), 4u);
    EXPECT_NEAR(o.worker_state.norm(), 1.0, 1e-12);
    const DensityMatrix rho(oracle::projector(o.worker_state), 1e-10);
    EXPECT_GE(hermitian_eigs(rho.matrix()).values.back(), -1e-10);
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(CtOracleN, GhzFourAndFiveQubits) {
  Rng rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n : {4, 5}) {
    const double a2 = u(rng);
    const Complex a = std::sqrt(a2), b = std::polar(std::sqrt(1.0 - a2), 2.0);
    const auto psi = make_ghz(n, a, b);
    const Partition p = all_partitions(n)[1];
    const auto r = ct_fidelity_oracle_n(psi, p, {});
    EXPECT_NEAR(r.fidelity, 2.0 * (std::abs(a) * std::abs(b) + 1.0) / 3.0, 1e-5);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.fidelity, ct_objective_bruteforce(psi, p, r.unitaries), 1e-12);
  }
}

TEST(CtOracleN, UniformWFourQubits) {
  const auto psi = make_uniform_w(4);
  for (const auto& p : all_partitions(4)) {
    const auto r = ct_fidelity_oracle_n(psi, p, {});
    EXPECT_NEAR(r.fidelity, (0.5 + 2.0) / 3.0, 1e-5);
  }
}

TEST(CtOracleN, ProductStateStaysClassical) {
  CVector v(16);
  v[0] = 1.0;
  const PureState psi(v);
  EXPECT_NEAR(ct_fidelity_oracle_n(psi, all_partitions(4)[0], {}).fidelity, 2.0 / 3.0, 1e-9);
}

TEST(CtOracleN, RejectsTooManyControllers) {
  EXPECT_THROW(ct_fidelity_oracle_n(make_uniform_w(6), all_partitions(6)[0], {}), std::invalid_argument);
  EXPECT_THROW(ct_fidelity_oracle_n(make_uniform_w(4), all_partitions(5)[0], {}), std::invalid_argument);
}

TEST(CtOracleN, ProductWeightsDivergeFromJointProbabilities) {
  // With two controllers the joint outcome distribution is not the product of
  // the marginals, so the two weightings differ at the optimum.
  const auto r = ct_fidelity_oracle_n(make_uniform_w(4), all_partitions(4)[0], {});
  EXPECT_GT(std::abs(r.product_weight_fidelity - r.fidelity), 1e-3);
}
