#include <gtest/gtest.h>

#include <cmath>

#include "bbmlab/convolution.hpp"
#include "bbmlab/wick.hpp"

using namespace bbm;

namespace {

constexpr double kPi = 3.141592653589793;

// Plain summation over |n| <= L; adequate when x + y is large.
double brute(double x, double y, int M, int m, long L = 2000000) {
  double acc = 0.0;
  for (long n = -L; n <= L; ++n) {
    if (std::labs(n) < M) continue;
    acc += std::pow(1.0 + double(n) * n, -x / 2) * std::pow(1.0 + double(m - n) * (m - n), -y / 2);
  }
  return acc;
}

}  // namespace

TEST(Convolution, ClosedForms) {
  const double coth = kPi / std::tanh(kPi);
  EXPECT_NEAR(conv_lhs(1.0, 1.0, 0, 0).value / coth, 1.0, 1e-12);
  const double two = 0.5 * (coth + kPi * kPi / std::pow(std::sinh(kPi), 2));
  EXPECT_NEAR(conv_lhs(2.0, 2.0, 0, 0).value / two, 1.0, 1e-12);
  // Removing |n| < 1 leaves the same sum minus the n = 0 term.
  EXPECT_NEAR(conv_lhs(1.0, 1.0, 1, 0).value, coth - 1.0, 1e-12);
}

TEST(Convolution, MatchesBruteForce) {
  const ConvolutionTable t(3.0, 2.5, 64);
  for (auto [M, m] : {std::pair{0, 0}, std::pair{3, 7}, std::pair{10, 64}, std::pair{40, 5}, std::pair{2, -9}}) {
    const double b = brute(3.0, 2.5, M, m);
    const ConvValue v = t.lhs(M, m);
    EXPECT_NEAR(v.value, b, v.remainder_bound + 1e-12 * b) << M << " " << m;
  }
}

TEST(Convolution, RemainderBoundIsSmall) {
  const ConvolutionTable t(1.2, 1.0, 256);
  for (int m : {0, 17, 256}) {
    const ConvValue v = t.lhs(4, m);
    EXPECT_LT(v.remainder_bound, 1e-10 * v.value);
  }
}

TEST(Convolution, SymmetricInM) {
  const ConvolutionTable t(2.0, 1.0, 100);
  for (int m : {1, 13, 100}) EXPECT_EQ(t.lhs(5, m).value, t.lhs(5, -m).value);
  // Reflection n -> -n maps <n>^{-x}<m-n>^{-y} to the same sum at -m.
  EXPECT_NEAR(brute(3.0, 2.0, 2, 11), brute(3.0, 2.0, 2, -11), 1e-14);
}

TEST(Convolution, DecaysLikeTheSmallerExponent) {
  for (auto [x, y] : {std::pair{3.0, 2.0}, std::pair{1.5, 2.5}}) {
    const ConvolutionTable t(x, y, 4096);
    std::vector<double> ms, vs;
    for (int m = 512; m <= 4096; m *= 2) ms.push_back(m), vs.push_back(t.lhs(0, m).value);
    EXPECT_NEAR(loglog_slope(ms, vs), -std::min(x, y), 0.05) << x << " " << y;
  }
}

TEST(Convolution, RejectsDivergentAndBadArguments) {
  try {
    ConvolutionTable(0.5, 0.5, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DivergentSum);
  }
  const ConvolutionTable t(1.0, 1.0, 8);
  EXPECT_THROW(t.lhs(-1, 0), Error);
  EXPECT_THROW(t.lhs(0, 9), Error);
}

TEST(Convolution, CaseParsing) {
  EXPECT_EQ(parse_conv_case("iii"), ConvCase::III);
  EXPECT_EQ(parse_conv_case("4"), ConvCase::IV);
  EXPECT_EQ(to_string(ConvCase::II), "ii");
  EXPECT_THROW(parse_conv_case("v"), Error);
  EXPECT_TRUE(conv_case_spec(ConvCase::I, 1.2).applies);
  EXPECT_FALSE(conv_case_spec(ConvCase::I, 1.6).applies);
  EXPECT_FALSE(conv_case_spec(ConvCase::II, 1.2).applies);
}

TEST(ConvSupStudy, StableUnderDoubling) {
  const std::vector<int> big_m{16, 64, 256};
  for (auto [c, s] : {std::pair{ConvCase::I, 1.2}, std::pair{ConvCase::II, 2.0}, std::pair{ConvCase::III, 1.5},
                      std::pair{ConvCase::IV, 1.5}}) {
    const ConvSupReport r = conv_sup_study(c, s, 1024, big_m);
    ASSERT_EQ(r.per_M.size(), big_m.size());
    for (std::size_t i = 0; i < big_m.size(); ++i) {
      EXPECT_EQ(r.per_M[i].M, big_m[i]);
      EXPECT_LE(r.per_M[i].sup, r.sup_large);
    }
    EXPECT_TRUE(std::isfinite(r.sup_large));
    EXPECT_GE(r.sup_large, r.sup_small);
    EXPECT_LT(r.change(), 0.05) << to_string(c);
    EXPECT_LT(r.worst_relative_remainder, 1e-3);  // far below the 5% stability scale
  }
  EXPECT_THROW(conv_sup_study(ConvCase::I, 2.0, 64, big_m), Error);
}
