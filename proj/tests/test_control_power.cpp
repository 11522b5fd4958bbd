#include <gtest/gtest.h>

#include <cmath>

#include "ctpower/control_power.hpp"
#include "oracles.hpp"

using namespace ctpower;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const double kInvSqrt3 = 1.0 / std::sqrt(3.0);

std::array<double, 4> random_simplex_point(Rng& rng) {
  std::normal_distribution<double> g;
  std::array<double, 4> l{};
  double n2 = 0.0;
  for (auto& x : l) {
    x = std::abs(g(rng));
    n2 += x * x;
  }
  for (auto& x : l) x /= std::sqrt(n2);
  return l;
}

std::vector<Complex> random_alphas(int n, Rng& rng) {
  std::normal_distribution<double> g;
  std::vector<Complex> a(static_cast<std::size_t>(n));
  double n2 = 0.0;
  for (auto& x : a) {
    x = Complex(g(rng), g(rng));
    n2 += std::norm(x);
  }
  for (auto& x : a) x /= std::sqrt(n2);
  return a;
}

void expect_report_invariants(const ControlReport& r) {
  ASSERT_FALSE(r.records.empty());
  double min_p = r.records.front().P;
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    const auto& rec = r.records[i];
    EXPECT_GE(rec.P, -1e-9);
    EXPECT_GE(rec.F_ct, rec.F_no_control - 1e-9);
    EXPECT_NEAR(rec.P, rec.F_ct - rec.F_no_control, 1e-15);
    EXPECT_NEAR(rec.f_no_control, (3.0 * rec.F_no_control - 1.0) / 2.0, 1e-15);
    if (i > 0) EXPECT_LT(r.records[i - 1].partition.controllers, rec.partition.controllers);
    min_p = std::min(min_p, rec.P);
    if (rec.partition == r.argmin) EXPECT_EQ(rec.P, r.minimal_P);
  }
  EXPECT_NEAR(r.minimal_P, min_p, 1e-12);
  bool meaningful = true;
  for (const auto& rec : r.records)
    meaningful = meaningful && rec.F_ct > 2.0 / 3.0 + 1e-12 && rec.F_no_control <= 2.0 / 3.0 + 1e-9;
  EXPECT_EQ(r.meaningful, meaningful);
}

}  // namespace

TEST(FctThreeQubit, Examples) {
  const auto ghz = make_ghz(3, std::sqrt(0.2), std::sqrt(0.8));
  const auto w = make_uniform_w(3);
  const auto product = make_ghz(3, 1.0, 0.0);
  for (int j = 1; j <= 3; ++j) {
    EXPECT_NEAR(fct_three_qubit(ghz, j), (2.0 * 0.4 + 2.0) / 3.0, 1e-12);
    EXPECT_NEAR(fct_three_qubit(w, j), 8.0 / 9.0, 1e-12);
    EXPECT_NEAR(fct_three_qubit(product, j), 2.0 / 3.0, 1e-12);
  }
}

TEST(ControlPower, GhzAndProduct) {
  const auto ghz = make_ghz(3, std::sqrt(0.2), std::sqrt(0.8));
  for (int j = 1; j <= 3; ++j) {
    EXPECT_NEAR(control_power(ghz, j), 2.0 * 0.4 / 3.0, 1e-12);
    EXPECT_NEAR(control_power(make_ghz(3, 1.0, 0.0), j), 0.0, 1e-12);
  }
}

TEST(ControlPower, StandardW) {
  // F_ct = 8/9 and F(rho_kl) = 7/9 for every controller.
  for (int j = 1; j <= 3; ++j) EXPECT_NEAR(control_power(make_uniform_w(3), j), 1.0 / 9.0, 1e-12);
}

TEST(MinimalControlPower, StandardGhz) {
  const auto r = minimal_control_power(make_ghz(3, kInvSqrt2, kInvSqrt2));
  EXPECT_NEAR(r.minimal_P, 1.0 / 3.0, 1e-12);
  EXPECT_TRUE(r.meaningful);
  EXPECT_EQ(r.method, ReportMethod::three_qubit);
  expect_report_invariants(r);
}

TEST(MinimalControlPower, StandardW) {
  const auto r = minimal_control_power(make_uniform_w(3));
  EXPECT_NEAR(r.minimal_P, 1.0 / 9.0, 1e-12);
  // F(rho_kl) = 7/9 exceeds the classical bound without control.
  EXPECT_FALSE(r.meaningful);
  expect_report_invariants(r);
}

TEST(MinimalControlPower, ProductState) {
  const auto r = minimal_control_power(make_ghz(3, 1.0, 0.0));
  EXPECT_NEAR(r.minimal_P, 0.0, 1e-12);
  EXPECT_FALSE(r.meaningful);
}

TEST(AssembleReport, SortsRecordsAndBreaksTiesByFirstPartition) {
  const auto parts = all_partitions(4);
  std::vector<PartitionRecord> recs;
  for (std::size_t i = parts.size(); i-- > 0;) recs.push_back({parts[i], 0.9, 0.6, 0.4, i == 1 || i == 4 ? 0.1 : 0.3});
  const auto r = assemble_report(4, ReportMethod::oracle, recs);
  for (std::size_t i = 0; i < parts.size(); ++i) EXPECT_EQ(r.records[i].partition, parts[i]);
  EXPECT_EQ(r.argmin, parts[1]);
  EXPECT_EQ(r.minimal_P, 0.1);
  EXPECT_TRUE(r.meaningful);
  EXPECT_THROW(assemble_report(4, ReportMethod::oracle, {}), std::invalid_argument);
}

TEST(MinimalControlPower, RandomThreeQubitInvariants) {
  Rng rng(1);
  for (int i = 0; i < 300; ++i) expect_report_invariants(minimal_control_power(random_pure_state(3, rng)));
}

TEST(MinimalControlPower, MeaningfulnessMatchesTangleAndCorrelationCriterion) {
  Rng rng(2);
  std::vector<PureState> states;
  for (int i = 0; i < 200; ++i) states.push_back(random_pure_state(3, rng));
  for (double a2 : {0.0, 0.3, 0.5}) states.push_back(make_ghz(3, std::sqrt(a2), std::sqrt(1.0 - a2)));
  for (int i = 0; i < 50; ++i) states.push_back(make_w_class(random_simplex_point(rng)));
  int meaningful = 0;
  for (const auto& psi : states) {
    bool expected = true;
    for (int j = 1; j <= 3; ++j) {
      const Partition p = Partition::three_qubit(j);
      expected = expected && partial_tangle(psi, p.k, p.l) > 1e-9 &&
                 correlation_matrix(psi.reduced({p.k, p.l})).trace_norm() <= 1.0 + 1e-9;
    }
    const bool got = minimal_control_power(psi).meaningful;
    EXPECT_EQ(got, expected);
    meaningful += got;
  }
  EXPECT_GT(meaningful, 0);
}

TEST(MinimalControlPower, FamilyDispatchAboveThreeQubits) {
  EXPECT_EQ(minimal_control_power(make_ghz(5, 0.6, 0.8)).method, ReportMethod::ghz);
  EXPECT_EQ(minimal_control_power(make_uniform_w(6)).method, ReportMethod::w_ntype);
  Rng rng(3);
  EXPECT_THROW(minimal_control_power(random_pure_state(4, rng)), UnsupportedStateError);
  ProtocolConfig cfg;
  EXPECT_THROW(minimal_control_power(random_pure_state(6, rng), cfg), UnsupportedStateError);
}

TEST(MinimalControlPower, OracleRouteForGenericFourQubitState) {
  Rng rng(4);
  const auto psi = random_pure_state(4, rng);
  ProtocolConfig cfg;
  cfg.optimizer.grid_resolution = 8;
  const auto r = minimal_control_power(psi, cfg);
  EXPECT_EQ(r.method, ReportMethod::oracle);
  EXPECT_EQ(r.records.size(), 6u);
  for (const auto& rec : r.records) EXPECT_GE(rec.F_ct, 2.0 / 3.0 - 1e-12);
}

TEST(MinimalControlPower, OracleAgreesWithClosedFormOnFamilies) {
  ProtocolConfig cfg;
  const auto ghz = make_ghz(4, std::sqrt(0.35), std::sqrt(0.65));
  const auto closed = ghz_closed_form(4, std::sqrt(0.35), std::sqrt(0.65));
  for (std::size_t i = 0; i < closed.records.size(); i += 2) {
    const auto& p = closed.records[i].partition;
    EXPECT_NEAR(ct_fidelity_oracle_n(ghz, p, cfg).fidelity, closed.records[i].F_ct, 1e-5);
    EXPECT_NEAR(fidelity_from_T(ghz.reduced({p.k, p.l})), closed.records[i].F_no_control, 1e-12);
  }
}

TEST(GhzClosedForm, Examples) {
  EXPECT_NEAR(ghz_closed_form(5, kInvSqrt2, kInvSqrt2).minimal_P, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(ghz_closed_form(4, 1.0, 0.0).minimal_P, 0.0, 1e-15);
  EXPECT_NEAR(ghz_closed_form(3, std::sqrt(0.9), std::sqrt(0.1)).minimal_P, 0.2, 1e-15);
  const auto r = ghz_closed_form(6, Complex(0.0, 0.6), 0.8);
  EXPECT_EQ(r.records.size(), 15u);
  for (const auto& rec : r.records) {
    EXPECT_NEAR(rec.F_ct, 2.0 * (0.48 + 1.0) / 3.0, 1e-15);
    EXPECT_EQ(rec.F_no_control, 2.0 / 3.0);
    EXPECT_NEAR(rec.P, 0.32, 1e-15);
  }
  expect_report_invariants(r);
  EXPECT_THROW(ghz_closed_form(3, 1.0, 1.0), NormalizationError);
}

TEST(GhzClosedForm, MatchesGenericThreeQubitPipeline) {
  for (double a2 = 0.0; a2 <= 1.0; a2 += 0.05) {
    const Complex a = std::sqrt(a2), b = std::polar(std::sqrt(std::max(0.0, 1.0 - a2)), 1.3);
    const auto closed = ghz_closed_form(3, a, b);
    const auto generic = minimal_control_power(make_ghz(3, a, b));
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_NEAR(closed.records[i].F_ct, generic.records[i].F_ct, 1e-12);
      EXPECT_NEAR(closed.records[i].F_no_control, generic.records[i].F_no_control, 1e-12);
    }
  }
}

TEST(GhzClosedForm, StandardStateIsMaximal) {
  double best = -1.0, best_a2 = -1.0;
  for (int i = 0; i <= 100; ++i) {
    const double a2 = i / 100.0;
    const double p = ghz_closed_form(3, std::sqrt(a2), std::sqrt(1.0 - a2)).minimal_P;
    EXPECT_NEAR(p, 2.0 * std::sqrt(a2 * (1.0 - a2)) / 3.0, 1e-12);
    if (p > best) best = p, best_a2 = a2;
  }
  EXPECT_EQ(best_a2, 0.5);
  EXPECT_NEAR(best, 1.0 / 3.0, 1e-12);
}

TEST(WClassClosedForm, StandardW) {
  const auto r = wclass_closed_form({0.0, kInvSqrt3, kInvSqrt3, kInvSqrt3});
  EXPECT_NEAR(r.minimal_P, 1.0 / 9.0, 1e-12);
  for (const auto& rec : r.records) {
    EXPECT_NEAR(rec.F_ct, 8.0 / 9.0, 1e-12);
    EXPECT_NEAR(rec.F_no_control, 7.0 / 9.0, 1e-12);
  }
}

TEST(WClassClosedForm, ZeroCoefficientsAreNotMeaningful) {
  const auto r = wclass_closed_form({0.0, 0.0, kInvSqrt2, kInvSqrt2});
  EXPECT_FALSE(r.meaningful);
  // Workers (2, 3) already share a Bell pair; the other pairs are uncorrelated.
  EXPECT_NEAR(r.records[0].F_no_control, 1.0, 1e-12);
  EXPECT_NEAR(r.records[1].F_ct, 2.0 / 3.0, 1e-12);
}

TEST(WClassClosedForm, MatchesGenericPipeline) {
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const auto l = random_simplex_point(rng);
    const auto closed = wclass_closed_form(l);
    const auto generic = minimal_control_power(make_w_class(l));
    EXPECT_NEAR(closed.minimal_P, generic.minimal_P, 1e-9);
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_NEAR(closed.records[j].F_ct, generic.records[j].F_ct, 1e-9);
      EXPECT_NEAR(closed.records[j].F_no_control, generic.records[j].F_no_control, 1e-9);
    }
    expect_report_invariants(closed);
  }
}

TEST(WClassClosedForm, TraceNormUsesLargerSignPattern) {
  // Each ||T^j||_1 from an independent SVD equals 2 lambda_k lambda_l + sqrt(max(A_upper, A_lower)).
  Rng rng(6);
  for (int i = 0; i < 200; ++i) {
    const auto l = random_simplex_point(rng);
    const auto psi = make_w_class(l);
    for (int j = 1; j <= 3; ++j) {
      const Partition p = Partition::three_qubit(j);
      const Eigen::Matrix3d t = oracle::correlation(psi.reduced({p.k, p.l}).matrix());
      Eigen::JacobiSVD<Eigen::Matrix3d> svd(t);
      const double norm = svd.singularValues().sum();
      const double lj = l[j], lk = l[p.k], ll = l[p.l], z = l[0] * l[0];
      const double upper = (z + std::pow(-lj + lk + ll, 2)) * (z + std::pow(lj + lk + ll, 2));
      const double lower = (z + std::pow(lj - lk + ll, 2)) * (z + std::pow(lj + lk - ll, 2));
      EXPECT_NEAR(norm, 2.0 * lk * ll + std::sqrt(std::max(upper, lower)), 1e-12);
    }
  }
}

TEST(WClassClosedForm, ControlPowerBoundOverSimplex) {
  Rng rng(7);
  double max_p = 0.0;
  for (int i = 0; i < 10000; ++i) max_p = std::max(max_p, wclass_closed_form(random_simplex_point(rng)).minimal_P);
  EXPECT_LE(max_p, 2.0 / 9.0 + 1e-9);
}

TEST(WNtypeClosedForm, UniformStates) {
  EXPECT_NEAR(w_ntype_closed_form(std::vector<Complex>(3, kInvSqrt3)).minimal_P, 1.0 / 9.0, 1e-12);
  EXPECT_NEAR(w_ntype_closed_form(std::vector<Complex>(4, 0.5)).minimal_P, 1.0 / 6.0, 1e-12);
  for (int n = 4; n <= 8; ++n) {
    const std::vector<Complex> a(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
    const auto r = w_ntype_closed_form(a);
    EXPECT_NEAR(r.minimal_P, 2.0 / (3.0 * n), 1e-12) << n;
    EXPECT_TRUE(r.meaningful) << n;
  }
}

TEST(WNtypeClosedForm, ZeroAmplitudeIsNotMeaningful) {
  const auto r = w_ntype_closed_form(std::vector<Complex>{kInvSqrt3, kInvSqrt3, kInvSqrt3, 0.0});
  EXPECT_NEAR(r.minimal_P, 1.0 / 9.0, 1e-12);
  EXPECT_FALSE(r.meaningful);
}

TEST(WNtypeClosedForm, MatchesGenericPipelineOnThreeQubits) {
  Rng rng(8);
  for (int i = 0; i < 300; ++i) {
    const auto a = random_alphas(3, rng);
    const auto closed = w_ntype_closed_form(a);
    const auto generic = minimal_control_power(make_w_ntype(a));
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_NEAR(closed.records[j].F_ct, generic.records[j].F_ct, 1e-9);
      EXPECT_NEAR(closed.records[j].F_no_control, generic.records[j].F_no_control, 1e-9);
    }
  }
}

TEST(WNtypeClosedForm, NoControlFidelityMatchesCorrelationMatrix) {
  Rng rng(9);
  for (int n = 4; n <= 6; ++n) {
    const auto a = random_alphas(n, rng);
    const auto psi = make_w_ntype(a);
    for (const auto& rec : w_ntype_closed_form(a).records)
      EXPECT_NEAR(rec.F_no_control, fidelity_from_T(psi.reduced({rec.partition.k, rec.partition.l})), 1e-12);
  }
}

TEST(WNtypeClosedForm, ControlPowerBound) {
  Rng rng(10);
  for (int n = 4; n <= 6; ++n) {
    double max_p = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const auto r = w_ntype_closed_form(random_alphas(n, rng));
      max_p = std::max(max_p, r.minimal_P);
    }
    EXPECT_LE(max_p, 2.0 / 9.0 + 1e-9) << n;
  }
}

TEST(WNtypeClosedForm, RejectsBadInput) {
  EXPECT_THROW(w_ntype_closed_form(std::vector<Complex>{1.0, 1.0, 0.0}), NormalizationError);
  EXPECT_THROW(w_ntype_closed_form(std::vector<Complex>{1.0, 0.0}), std::invalid_argument);
}

TEST(FamilyDetection, GhzAndW) {
  EXPECT_TRUE(as_ghz(make_ghz(4, 0.6, 0.8)).has_value());
  EXPECT_FALSE(as_ghz(make_uniform_w(4)).has_value());
  EXPECT_TRUE(as_w_ntype(make_uniform_w(4)).has_value());
  EXPECT_FALSE(as_w_ntype(make_ghz(4, 0.6, 0.8)).has_value());
  const auto alphas = as_w_ntype(make_w_ntype({0.6, 0.0, Complex(0.0, 0.8), 0.0}));
  ASSERT_TRUE(alphas.has_value());
  EXPECT_EQ((*alphas)[2], Complex(0.0, 0.8));
}
