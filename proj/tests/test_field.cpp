#include <gtest/gtest.h>

#include <random>

#include "bbmlab/field.hpp"

using namespace bbm;

namespace {

TorusField random_field(int K, unsigned seed) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> g;
  TorusField u(K);
  for (int n = 1; n <= K; ++n) u.at(n) = cplx(g(eng), g(eng)) / (1.0 + n);
  return u;
}

TorusField cos_x() { return TorusField::mode(1, 1, 0.5); }

// sum_k u(k) v(n - k) over all nonzero k.
cplx brute_convolution(const TorusField& u, const TorusField& v, int n) {
  cplx acc = 0.0;
  const int K = u.extent() + v.extent();
  for (int k = -K; k <= K; ++k) acc += u[k] * v[n - k];
  return acc;
}

}  // namespace

TEST(TorusField, NegativeModesAreConjugates) {
  TorusField u(3);
  u.at(2) = cplx(1.0, 2.0);
  EXPECT_EQ(u[-2], cplx(1.0, -2.0));
  EXPECT_EQ(u[0], cplx{});
  EXPECT_EQ(u[4], cplx{});
}

TEST(TorusField, JsonRoundTrip) {
  const TorusField u = random_field(9, 3);
  EXPECT_EQ(field_from_json(to_json(u)), u);
}

TEST(TorusField, JsonRejectsModeOutsideExtent) {
  nlohmann::json j = {{"extent", 2}, {"coeffs", {{3, 1.0, 0.0}}}};
  EXPECT_THROW(field_from_json(j), Error);
}

TEST(Project, KeepsLowModes) {
  TorusField u(3);
  u.at(1) = 1.0;
  u.at(3) = 1.0;
  const TorusField p = project(u, 2);
  EXPECT_EQ(p[1], cplx(1.0));
  EXPECT_EQ(p[3], cplx{});
}

TEST(Project, IdempotentAndIdentityAtExtent) {
  const TorusField u = random_field(10, 1);
  EXPECT_EQ(project(project(u, 2), 2), project(u, 2));
  EXPECT_EQ(project(u, 10), u);
}

TEST(LpBlock, SingleModeMembership) {
  const TorusField one = TorusField::mode(4, 1, 1.0);
  EXPECT_EQ(lp_block(one, 0), one);
  EXPECT_EQ(max_abs_diff(lp_block(one, 1), TorusField(4)), 0.0);
  const TorusField three = TorusField::mode(4, 3, 1.0);
  EXPECT_EQ(lp_block(three, 2), three);
  EXPECT_EQ(max_abs_diff(lp_block(three, 1), TorusField(4)), 0.0);
}

TEST(LpBlock, BlocksReconstructField) {
  const TorusField u = random_field(64, 2);
  TorusField sum(64);
  for (int j = 0; j < lp_block_count(64); ++j) sum += lp_block(u, j);
  EXPECT_EQ(max_abs_diff(sum, u), 0.0);
}

TEST(Multipliers, FracDerivative) {
  const TorusField u = random_field(12, 4);
  EXPECT_EQ(frac_derivative(u, 0.0), u);
  EXPECT_EQ(frac_derivative(TorusField::mode(2, 2, 1.0), 1.0)[2], cplx(2.0));
  EXPECT_LT(max_abs_diff(frac_derivative(frac_derivative(u, 0.7), 1.3), frac_derivative(u, 2.0)), 1e-13);
}

TEST(Multipliers, DerivativeAndSmoothing) {
  EXPECT_EQ(x_derivative(cos_x())[1], cplx(0.0, 0.5));
  EXPECT_EQ(smoothing_inverse(TorusField::mode(1, 1, 1.0))[1], cplx(0.5));
}

TEST(Multipliers, CommuteWithProjectionAndEachOther) {
  const TorusField u = random_field(20, 5);
  EXPECT_EQ(project(x_derivative(u), 7), x_derivative(project(u, 7)));
  EXPECT_EQ(project(smoothing_inverse(u), 7), smoothing_inverse(project(u, 7)));
  EXPECT_LT(max_abs_diff(x_derivative(frac_derivative(u, 1.5)), frac_derivative(x_derivative(u), 1.5)), 1e-12);
  EXPECT_LT(max_abs_diff(smoothing_inverse(x_derivative(u)), x_derivative(smoothing_inverse(u))), 1e-15);
}

TEST(Product, DoubleAngle) {
  const Grid grid = Grid::for_extent(2);
  const Spectrum p = product(cos_x(), cos_x(), grid);
  EXPECT_NEAR(p.mean, 0.5, 1e-15);
  EXPECT_NEAR(std::abs(p.field[2] - cplx(0.25)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(p.field[1]), 0.0, 1e-15);
}

TEST(Product, ZeroFactor) {
  const TorusField u = random_field(8, 6);
  const Spectrum p = product(u, TorusField(8), Grid::for_extent(16));
  EXPECT_EQ(max_abs_diff(p.field, TorusField(16)), 0.0);
}

TEST(Product, MatchesBruteForceConvolution) {
  for (int K : {16, 32}) {
    const TorusField u = random_field(K, 7);
    const TorusField v = random_field(K, 8);
    const Spectrum p = product(u, v, Grid::for_extent(2 * K));
    for (int n = 1; n <= 2 * K; ++n) EXPECT_LT(std::abs(p.field[n] - brute_convolution(u, v, n)), 1e-12) << n;
  }
}

TEST(Product, BilinearAndCommutative) {
  const Grid grid = Grid::for_extent(24);
  const TorusField u = random_field(12, 9), v = random_field(12, 10), w = random_field(12, 11);
  EXPECT_LT(max_abs_diff(product(u, v, grid).field, product(v, u, grid).field), 1e-15);
  const TorusField lhs = product(u + 2.0 * w, v, grid).field;
  const TorusField rhs = product(u, v, grid).field + 2.0 * product(w, v, grid).field;
  EXPECT_LT(max_abs_diff(lhs, rhs), 1e-13);
}

TEST(Product, RejectsAliasingGrid) {
  const TorusField u = random_field(16, 1);
  EXPECT_THROW(
      {
        try {
          product(u, u, Grid{32, 3});
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), Errc::GridTooSmall);
          throw;
        }
      },
      Error);
}

TEST(Norms, CosineValues) {
  EXPECT_DOUBLE_EQ(sobolev_norm_sq(cos_x(), 0.0), 0.25);
  EXPECT_NEAR(l2_norm_sq(cos_x()), kPi, 1e-15);
  EXPECT_NEAR(energy(cos_x()), std::sqrt(kTwoPi), 1e-15);
  EXPECT_EQ(sobolev_norm_sq(TorusField(5), 1.0), 0.0);
  EXPECT_EQ(energy(TorusField(5)), 0.0);
}

TEST(Norms, IndexShift) {
  const TorusField u = random_field(30, 12);
  EXPECT_NEAR(sobolev_norm_sq(frac_derivative(u, 0.75), 1.0), sobolev_norm_sq(u, 1.75),
              1e-12 * sobolev_norm_sq(u, 1.75));
}

TEST(Norms, TruncationDecreasesEnergy) {
  for (unsigned seed = 0; seed < 10; ++seed) {
    const TorusField u = random_field(40, seed);
    EXPECT_LE(energy(project(u, 13)), energy(u));
  }
}

TEST(Norms, MonotoneInIndexForFlatSpectrum) {
  TorusField u(10);
  for (int n = 1; n <= 10; ++n) u.at(n) = std::polar(0.3, n * 1.0);
  double prev = 0.0;
  for (double s = 0.0; s <= 3.0; s += 0.25) {
    const double v = sobolev_norm_sq(u, s);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(Norms, Parseval) {
  const TorusField u = random_field(25, 13);
  const Grid grid = Grid::for_extent(25);
  const auto vals = to_physical(u, grid.points);
  std::vector<double> sq(vals.size());
  for (std::size_t j = 0; j < vals.size(); ++j) sq[j] = vals[j] * vals[j];
  EXPECT_NEAR(integrate(sq), l2_norm_sq(u), 1e-12 * l2_norm_sq(u));
}

TEST(Physical, RoundTripAndPointEvaluation) {
  const TorusField u = random_field(10, 14);
  const auto vals = to_physical(u, 64);
  EXPECT_LT(max_abs_diff(from_physical(vals, 10).field, u), 1e-15);
  EXPECT_NEAR(vals[5], evaluate(u, kTwoPi * 5 / 64), 1e-13);
}

TEST(LinfNorm, Cosine) { EXPECT_NEAR(linf_norm(cos_x(), Grid::for_extent(1)), 1.0, 1e-9); }

TEST(LinfNorm, Homogeneity) {
  const TorusField u = random_field(16, 15);
  const Grid grid = Grid::for_extent(16);
  EXPECT_NEAR(linf_norm(-2.5 * u, grid), 2.5 * linf_norm(u, grid), 1e-12);
}

TEST(LinfNorm, DenseGridOracle) {
  TorusField u(2);
  u.at(1) = 0.5;
  u.at(2) = 0.5;
  double dense = 0.0;
  for (int j = 0; j < 2048; ++j) dense = std::max(dense, std::abs(evaluate(u, kTwoPi * j / 2048)));
  const double v = linf_norm(u, Grid::for_extent(2));
  EXPECT_NEAR(v, dense, 1e-8);
  EXPECT_GE(v, dense - 1e-15);
}

TEST(LinfNorm, StableUnderGridRefinement) {
  const TorusField u = random_field(64, 16);
  const double a = linf_norm(u, Grid{256, 3});
  const double b = linf_norm(u, Grid{2048, 3});
  EXPECT_LT(std::abs(a - b), 1e-6 * b);
}

TEST(Grid, DefaultSizing) {
  const Grid g = Grid::for_extent(10);
  EXPECT_EQ(g.points, 64);
  EXPECT_TRUE(g.supports(10));
  EXPECT_FALSE((Grid{30, 3}.supports(10)));
}
