#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "bbmlab/experiments.hpp"

using namespace bbm;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kCut = 32;  // small sampling cutoff keeps these fast
}  // namespace

TEST(Experiments, Upsilon) {
  EXPECT_DOUBLE_EQ(upsilon(1.0), 0.25);
  EXPECT_DOUBLE_EQ(upsilon(1.5), 0.5);
  EXPECT_DOUBLE_EQ(upsilon(3.0), 0.5);
}

TEST(Experiments, ObservablesNestInR) {
  const SeedPlan plan{17, 0};
  const double r1 = energy_quantile(1.5, 0.3, plan, 2000, kCut), r2 = energy_quantile(1.5, 0.7, plan, 2000, kCut);
  const ObservableSet small = collect_observables(8, 1.5, r1, 2000, plan, {}, kCut);
  const ObservableSet big = collect_observables(8, 1.5, r2, 2000, plan, {}, kCut);
  std::size_t a = 0, b = 0;
  for (std::size_t i = 0; i < small.size(); ++i) {
    if (small.accepted[i]) {
      EXPECT_TRUE(big.accepted[i]);
      EXPECT_EQ(small.f[i], big.f[i]);
    } else {
      EXPECT_EQ(small.f[i], 0.0);
    }
    a += small.accepted[i] ? 1 : 0;
    b += big.accepted[i] ? 1 : 0;
  }
  EXPECT_LT(a, b);
  EXPECT_GT(a, 0u);
}

TEST(Experiments, SecondMomentMatchesWickAtInfiniteRadius) {
  const HyperGrowth h = hyper_growth(8, 4, 1.5, {2.0}, 40000, SeedPlan{23, 0});
  const MomentRow& r = h.moments.rows.front();
  EXPECT_LE(std::abs(r.norm - h.exact_l2), 5.0 * r.std_error);
}

TEST(Experiments, MomentTableGuards) {
  EXPECT_THROW(moment_table({1.0, 2.0}, nullptr, {}, 0), Error);
  EXPECT_THROW(moment_table({1.0, 2.0}, nullptr, {14.0}, 0), Error);
  // One huge value dominates the p = 10 moment: the bootstrap CV explodes.
  std::vector<double> x(1000, 1.0);
  x[0] = 1e3;
  try {
    moment_table(x, nullptr, {2.0, 10.0}, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::MomentUnstable);
  }
}

TEST(Experiments, MomentTableRatiosBracket) {
  std::vector<double> x;
  for (int i = 1; i <= 2000; ++i) x.push_back(std::sin(0.37 * i) * 3.0);
  const MomentTable t = moment_table(x, nullptr, {2.0, 4.0, 6.0}, 3);
  EXPECT_GE(t.ratio_upper(), t.ratio());
  EXPECT_GE(t.p_exponent_upper(), t.p_exponent);
}

TEST(Experiments, SetDescriptions) {
  EXPECT_EQ(SetSpec::full().describe(), "full");
  EXPECT_EQ(SetSpec::h12_ball(0.5).describe(), "h12_ball(r=0.500000)");
  EXPECT_EQ(SetSpec::mode_box(2, 0.5, 1.0).describe(), "mode_box(n=2,[0.500000,1.000000])");
}

TEST(Experiments, ChangeOfVariablesAtTimeZero) {
  const SetSpec box = SetSpec::mode_box(1, 0.2, kInf);
  const CovIdentity c = cov_identity(4, 1.5, kInf, 0.0, box, 5000, SeedPlan{5, 0}, kCut);
  EXPECT_LE(c.z, 4.0);
  EXPECT_GT(c.lhs.mean, 0.0);
  const CovIdentity f = cov_identity(4, 1.5, kInf, 0.0, SetSpec::full(), 500, SeedPlan{5, 0}, kCut);
  EXPECT_EQ(f.lhs.mean, 1.0);
  EXPECT_EQ(f.rhs.mean, 1.0);
  EXPECT_EQ(f.z, 0.0);
  EXPECT_NEAR(f.weights.ess_fraction, 1.0, 1e-12);
}

TEST(Experiments, ChangeOfVariablesOnTheWholeSpace) {
  // gamma(Phi_t(whole space)) = 1, so the forward weights average to 1.
  for (int N : {2, 4}) {
    const CovIdentity c = cov_identity(N, 1.5, kInf, 0.1, SetSpec::full(), 20000, SeedPlan{6, 0}, kCut);
    EXPECT_EQ(c.lhs.mean, 1.0);
    EXPECT_LT(c.weights.pareto_k, 0.5);
    EXPECT_LE(c.z, 4.0) << N;
  }
}

TEST(Experiments, WeightDiagnosticsFlagLongerTimes) {
  // The weight tail thickens with t; past k = 1/2 the sample mean is no
  // longer trustworthy and the diagnostic has to say so.
  const CovIdentity c = cov_identity(4, 1.5, kInf, 0.25, SetSpec::full(), 20000, SeedPlan{6, 0}, kCut);
  EXPECT_GT(c.weights.pareto_k, 0.5);
  EXPECT_LT(c.weights.ess_fraction, 0.2);
}

TEST(Experiments, TransportStartsAtTheSetMass) {
  const double r = h12_quantile(1.5, 0.2, SeedPlan{8, 0}, 5000, kCut);
  const TransportGrowth g = transport_growth(4, 1.5, kInf, SetSpec::h12_ball(r), 0.5, 2, 8000, SeedPlan{8, 0}, kCut);
  ASSERT_EQ(g.rows.size(), 3u);
  EXPECT_EQ(g.rows[0].t, 0.0);
  EXPECT_NEAR(g.rows[0].mass.mean, 0.2, 4.0 * g.rows[0].mass.std_error + 0.01);
  EXPECT_EQ(g.total_mass, 1.0);
  for (const auto& row : g.rows) EXPECT_LE(row.mass.mean, g.total_mass);
  EXPECT_GE(g.c_upper, 1.0);
  EXPECT_GE(g.c_lower, 1.0);
  EXPECT_TRUE(g.envelopes_exist());
}

TEST(Experiments, TransportRejectsLargeSets) {
  try {
    transport_growth(4, 1.5, kInf, SetSpec::full(), 0.5, 1, 500, SeedPlan{1, 0}, kCut);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::MassOutOfRange);
  }
  EXPECT_THROW(transport_growth(4, 1.5, kInf, SetSpec::full(), 0.0, 1, 10, SeedPlan{1, 0}, kCut), Error);
}

TEST(Experiments, FlowExperimentsNeedSAboveOne) {
  EXPECT_THROW(collect_observables(8, 0.9, 1.0, 10, SeedPlan{1, 0}, {}, kCut), Error);
  EXPECT_THROW(collect_observables(64, 1.5, 1.0, 10, SeedPlan{1, 0}, {}, kCut), Error);
}
