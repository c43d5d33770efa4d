#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bbmlab/stats.hpp"

using namespace bbm;

TEST(Wilson, KnownInterval) {
  const auto [lo, hi] = wilson_interval(5, 10);
  EXPECT_NEAR(lo, 0.2366, 1e-4);
  EXPECT_NEAR(hi, 0.7634, 1e-4);
  const auto [lo0, hi0] = wilson_interval(0, 100);
  EXPECT_EQ(lo0, 0.0);
  EXPECT_NEAR(hi0, 0.037, 1e-3);
}

TEST(McEstimates, MeanAndVariance) {
  const std::vector<double> v{1, 2, 3, 4};
  const McEstimate m = mc_mean(v);
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  EXPECT_NEAR(m.std_error, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);

  std::mt19937_64 eng(3);
  std::normal_distribution<double> g(0.0, 2.0);
  std::vector<double> x(200000);
  for (double& e : x) e = g(eng);
  const McEstimate var = mc_variance(x);
  // se of the sample variance of N(0, 4) is sqrt(2 * 16 / n).
  EXPECT_NEAR(var.std_error, std::sqrt(32.0 / x.size()), 0.02 * var.std_error);
  EXPECT_LE(std::abs(var.mean - 4.0), 4.0 * var.std_error);
  EXPECT_THROW(mc_variance(std::vector<double>{1.0}), Error);
}

TEST(McEstimates, ZScoreCombinesErrors) {
  const McEstimate a{1.0, 0.1, 10, 0}, b{1.5, 0.1, 10, 0};
  EXPECT_NEAR(z_score(a, b), 0.5 / (0.1 * std::sqrt(2.0)), 1e-12);
  const McEstimate c{2.0, 0.0, 1, 0};
  EXPECT_EQ(z_score(c, c), 0.0);
  EXPECT_TRUE(std::isinf(z_score(c, McEstimate{3.0, 0.0, 1, 0})));
}

TEST(WeightDiagnosticsTest, EqualWeights) {
  const std::vector<double> w(1000, 0.7);
  const WeightDiagnostics d = weight_diagnostics(w);
  EXPECT_NEAR(d.ess, 1000.0, 1e-9);
  EXPECT_NEAR(d.ess_fraction, 1.0, 1e-12);
  EXPECT_NEAR(d.pareto_k, 0.0, 1e-12);
}

TEST(WeightDiagnosticsTest, RecoversParetoShape) {
  std::mt19937_64 eng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double k : {0.3, 0.8}) {
    std::vector<double> w(100000);
    for (double& e : w) e = std::pow(1.0 - u(eng), -k);
    const WeightDiagnostics d = weight_diagnostics(w);
    EXPECT_NEAR(d.pareto_k, k, 0.1) << k;
    EXPECT_EQ(d.tail_size, 948u);
  }
}

TEST(TailFitTest, RecoversWeibullExponent) {
  // S(t) = exp(-t^alpha) exactly.
  std::mt19937_64 eng(9);
  std::exponential_distribution<double> e(1.0);
  for (double alpha : {1.0, 2.0}) {
    std::vector<double> x(400000);
    for (double& v : x) v = std::pow(e(eng), 1.0 / alpha);
    const TailCurve c = survival_curve("w", x, std::vector<char>(x.size(), 1), 32, 11);
    EXPECT_NEAR(c.fit.alpha, alpha, 3.0 * c.fit.alpha_stderr + 0.05) << alpha;
    EXPECT_NEAR(c.fit.c, 1.0, 0.3);
    EXPECT_GT(c.fit.alpha_stderr, 0.0);
    EXPECT_EQ(c.mass, 1.0);
    for (std::size_t i = 1; i < c.points.size(); ++i) {
      EXPECT_GT(c.points[i].t, c.points[i - 1].t);
      EXPECT_LE(c.points[i].survival, c.points[i - 1].survival);
      EXPECT_LE(c.points[i].ci_lo, c.points[i].survival);
      EXPECT_GE(c.points[i].ci_hi, c.points[i].survival);
    }
  }
}

TEST(TailFitTest, RejectionLowersMassNotShape) {
  std::mt19937_64 eng(4);
  std::exponential_distribution<double> e(1.0);
  std::bernoulli_distribution keep(0.5);
  std::vector<double> x(400000);
  std::vector<char> acc(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = e(eng), acc[i] = keep(eng);
  const TailCurve c = survival_curve("half", x, acc, 24, 1);
  EXPECT_NEAR(c.mass, 0.5, 0.005);
  EXPECT_NEAR(c.fit.C, 0.5, 0.1);
  EXPECT_NEAR(c.fit.alpha, 1.0, 3.0 * c.fit.alpha_stderr + 0.05);
}

TEST(TailFitTest, InsufficientTail) {
  const std::vector<double> x(80, 1.0);
  try {
    survival_curve("few", x, std::vector<char>(x.size(), 1), 8, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InsufficientTail);
  }
  EXPECT_THROW(survival_curve("bad", x, std::vector<char>(3, 1), 8, 0), Error);
}

TEST(Moments, ExponentialNorms) {
  std::mt19937_64 eng(2);
  std::exponential_distribution<double> e(1.0);
  std::vector<double> x(400000);
  for (double& v : x) v = e(eng);
  // E X^p = p!
  for (double p : {1.0, 2.0, 4.0}) {
    const MomentEstimate m = lp_moment(x, nullptr, p, 1);
    const double exact = std::pow(std::tgamma(p + 1.0), 1.0 / p);
    EXPECT_LE(std::abs(m.norm - exact), 5.0 * m.std_error) << p;
    EXPECT_LT(m.cv, 0.1);
  }
  std::vector<char> none(x.size(), 0);
  EXPECT_EQ(lp_moment(x, &none, 2.0, 1).norm, 0.0);
}
