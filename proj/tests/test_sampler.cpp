#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "bbmlab/sampler.hpp"

using namespace bbm;

namespace {

struct Moments {
  double mean = 0.0, stderr_ = 0.0;
};

template <class F>
Moments mc(int n, F&& f) {
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = f(i);
    s += v;
    s2 += v * v;
  }
  const double m = s / n;
  const double var = (s2 - n * m * m) / (n - 1);
  return {m, std::sqrt(var / n)};
}

}  // namespace

TEST(SeedPlan, Deterministic) {
  const SeedPlan plan{42, 0};
  const GaussianSpec spec{SobolevIndex(1.5), 64};
  EXPECT_EQ(draw_field(spec, plan, 7), draw_field(spec, plan, 7));
  EXPECT_NE(draw_field(spec, plan, 7), draw_field(spec, plan, 8));
  EXPECT_NE(draw_field(spec, SeedPlan{43, 0}, 7), draw_field(spec, plan, 7));
}

TEST(SeedPlan, BatchReproducible) {
  const SeedPlan plan{2024, 3};
  const GaussianSampler sampler(GaussianSpec{SobolevIndex(1.2), 32});
  std::vector<TorusField> forward, backward(1000);
  for (int i = 0; i < 1000; ++i) forward.push_back(sampler.draw(plan, i));
  for (int i = 999; i >= 0; --i) backward[static_cast<std::size_t>(i)] = sampler.draw(plan, i);
  EXPECT_EQ(forward, backward);
}

TEST(SeedPlan, PrefixStableInCutoff) {
  const SeedPlan plan{5, 0};
  const TorusField a = draw_field(GaussianSpec{SobolevIndex(1.5), 16}, plan, 3);
  const TorusField b = draw_field(GaussianSpec{SobolevIndex(1.5), 128}, plan, 3);
  EXPECT_EQ(truncate(b, 16), a);
}

TEST(GaussianSpec, RejectsSmallIndex) {
  EXPECT_THROW(GaussianSampler(GaussianSpec{SobolevIndex(0.5), 8}), Error);
  EXPECT_THROW(GaussianSampler(GaussianSpec{SobolevIndex(1.0), 0}), Error);
}

TEST(DrawField, SecondMomentOfMode2) {
  // E|c(2)|^2 = 2^{-(2s+1)} = 1/8 at s = 1.
  const GaussianSampler sampler(GaussianSpec{SobolevIndex(1.0), 4});
  const SeedPlan plan{11, 0};
  const Moments m = mc(100000, [&](int i) { return std::norm(sampler.draw(plan, i)[2]); });
  EXPECT_NEAR(m.mean, 1.0 / 8.0, 5 * m.stderr_);
}

TEST(DrawField, SecondMomentAtLargerIndex) {
  const GaussianSampler sampler(GaussianSpec{SobolevIndex(2.0), 4});
  const SeedPlan plan{19, 0};
  const Moments m = mc(100000, [&](int i) { return std::norm(sampler.draw(plan, i)[2]); });
  EXPECT_NEAR(m.mean, 1.0 / 32.0, 5 * m.stderr_);
}

TEST(DrawField, MeanZeroAndOrthogonal) {
  const GaussianSampler sampler(GaussianSpec{SobolevIndex(1.0), 4});
  const SeedPlan plan{12, 0};
  std::vector<TorusField> draws;
  for (int i = 0; i < 100000; ++i) draws.push_back(sampler.draw(plan, i));
  auto check = [&](auto f) {
    const Moments m = mc(100000, [&](int i) { return f(draws[static_cast<std::size_t>(i)]); });
    EXPECT_NEAR(m.mean, 0.0, 5 * m.stderr_);
  };
  check([](const TorusField& u) { return u[1].real(); });
  check([](const TorusField& u) { return u[3].imag(); });
  check([](const TorusField& u) { return (u[1] * u[2]).real(); });
  check([](const TorusField& u) { return (u[1] * u[2]).imag(); });
  check([](const TorusField& u) { return (u[2] * u[-3]).real(); });
  // E[c(n)^2] = 0 too: real and imaginary parts have equal variance.
  check([](const TorusField& u) { return (u[2] * u[2]).real(); });
}

TEST(DrawField, VarianceLawChiSquared) {
  // Per mode, 2 n^{2s+1} |c(n)|^2 is chi-squared with 2 degrees of freedom, so
  // its sum over the draws is Gamma(n_draws, 2). Compare with a normal
  // approximation at 20 modes; |z| < 5 corresponds to p > 1e-6.
  const double s = 1.3;
  const int K = 200;
  const GaussianSampler sampler(GaussianSpec{SobolevIndex(s), K});
  const SeedPlan plan{13, 0};
  const int n = 100000;
  std::vector<int> modes;
  std::mt19937 pick(1);
  for (int j = 0; j < 20; ++j) modes.push_back(std::uniform_int_distribution<int>(1, K)(pick));
  std::vector<double> acc(modes.size());
  for (int i = 0; i < n; ++i) {
    const TorusField u = sampler.draw(plan, i);
    for (std::size_t j = 0; j < modes.size(); ++j)
      acc[j] += 2.0 * std::pow(modes[j], 2 * s + 1) * std::norm(u[modes[j]]);
  }
  for (std::size_t j = 0; j < modes.size(); ++j) {
    const double z = (acc[j] - 2.0 * n) / std::sqrt(4.0 * n);
    EXPECT_LT(std::abs(z), 5.0) << "mode " << modes[j];
  }
}

TEST(DrawField, EnergyStochasticallyDecreasingInS) {
  const SeedPlan plan{14, 0};
  const GaussianSampler lo(GaussianSpec{SobolevIndex(1.1), 256});
  const GaussianSampler hi(GaussianSpec{SobolevIndex(1.8), 256});
  // Same seed, same g_n: every coefficient shrinks pointwise as s grows.
  for (int i = 0; i < 200; ++i) EXPECT_LE(energy(hi.draw(plan, i)), energy(lo.draw(plan, i)));
}

TEST(DrawRestricted, InfiniteAndZeroRadius) {
  const GaussianSampler sampler(GaussianSpec{SobolevIndex(1.5), 32});
  const SeedPlan plan{15, 0};
  for (int i = 0; i < 50; ++i) {
    EXPECT_TRUE(draw_restricted(sampler, std::numeric_limits<double>::infinity(), plan, i).accepted);
    EXPECT_FALSE(draw_restricted(sampler, 0.0, plan, i).accepted);
  }
  const RestrictedSpec spec{GaussianSpec{SobolevIndex(1.5), 32}, 0.0};
  EXPECT_FALSE(draw_restricted(spec, plan, 0).accepted);
}

TEST(CalibrateR, MedianGivesHalfAcceptance) {
  const GaussianSpec spec{SobolevIndex(1.5), 64};
  const SeedPlan plan{16, 0};
  const double R = calibrate_R(spec, 0.5, 4000, plan);
  const GaussianSampler sampler(spec);
  const Moments m = mc(20000, [&](int i) { return draw_restricted(sampler, R, plan, i).accepted ? 1.0 : 0.0; });
  // The calibration quantile itself carries error ~ 0.5/sqrt(n_cal).
  const double sigma = std::hypot(m.stderr_, 0.5 / std::sqrt(4000.0));
  EXPECT_NEAR(m.mean, 0.5, 3 * sigma);
}

TEST(CalibrateR, OrderStatistics) {
  const GaussianSpec spec{SobolevIndex(1.5), 32};
  const SeedPlan plan{17, 0};
  const int n = 500;
  const SeedPlan cal = plan.substream(0xCA1B);
  double top = 0.0;
  for (int i = 0; i < n; ++i) top = std::max(top, energy(draw_field(spec, cal, i)));
  EXPECT_EQ(calibrate_R(spec, 0.9999, n, plan), top);
  EXPECT_LE(calibrate_R(spec, 0.25, n, plan), calibrate_R(spec, 0.75, n, plan));
}

TEST(CalibrateR, Errors) {
  const GaussianSpec spec{SobolevIndex(1.5), 32};
  try {
    calibrate_R(spec, 0.5, 99, SeedPlan{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DegenerateQuantile);
  }
  EXPECT_THROW(calibrate_R(spec, 1.0, 200, SeedPlan{}), Error);
}

TEST(EnergyMoment, ClosedFormMatchesMonteCarlo) {
  const GaussianSpec spec{SobolevIndex(1.5), 1024};
  const GaussianSampler sampler(spec);
  const SeedPlan plan{18, 0};
  const Moments m = mc(20000, [&](int i) {
    const double e = energy(sampler.draw(plan, i));
    return e * e;
  });
  EXPECT_NEAR(m.mean, energy_second_moment(1.5, 1024), 5 * m.stderr_);
}

TEST(EnergyMoment, TruncationBoundDominatesTail) {
  const double s = 1.5;
  const int K = 64;
  const double tail = energy_second_moment(s, 1 << 20) - energy_second_moment(s, K);
  EXPECT_GT(energy_truncation_bound(s, K), tail);
  EXPECT_LT(energy_truncation_bound(s, K), 2.0 * tail);
}
