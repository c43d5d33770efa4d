#include <gtest/gtest.h>

#include <cmath>

#include "bbmlab/flow.hpp"
#include "bbmlab/sampler.hpp"

using namespace bbm;

namespace {

TorusField gaussian_draw(double s, int K, std::uint64_t i, std::uint64_t seed = 99) {
  return draw_field(GaussianSpec{SobolevIndex(s), K}, SeedPlan{seed, 0}, i);
}

FlowConfig config(int N, double t_end, std::optional<double> dt = {}) {
  FlowConfig c;
  c.N = N;
  c.t_end = t_end;
  c.dt = dt;
  return c;
}

}  // namespace

TEST(VectorField, ZeroField) {
  const TorusField v = vector_field(TorusField(4), 4, Grid::for_extent(4));
  EXPECT_EQ(max_abs_diff(v, TorusField(4)), 0.0);
}

TEST(VectorField, CosineDoubleAngle) {
  const TorusField u = TorusField::mode(1, 1, 0.5);
  const TorusField v = vector_field(u, 2, Grid::for_extent(2));
  EXPECT_NEAR(std::abs(v[2] - cplx(0.0, -2.0 / 3.0 * 0.25)), 0.0, 1e-16);
  EXPECT_NEAR(std::abs(v[1] - cplx(0.0, -0.5 * 0.5)), 0.0, 1e-16);
}

TEST(VectorField, HighModesOnlyRotate) {
  const TorusField u = gaussian_draw(1.5, 20, 0);
  const TorusField v = vector_field(u, 8, Grid::for_extent(8));
  for (int n = 9; n <= 20; ++n) EXPECT_EQ(v[n], cplx(0.0, -dispersion(n)) * u[n]);
}

TEST(VectorField, RejectsCoarseGrid) {
  const TorusField u = gaussian_draw(1.5, 8, 0);
  try {
    vector_field(u, 8, Grid{16, 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::GridTooSmall);
  }
}

TEST(Evolve, SingleModeAnalytic) {
  const TorusField u0 = TorusField::mode(1, 1, 0.5);
  const FlowResult r = evolve(u0, config(1, 1.0), Grid::for_extent(1));
  EXPECT_LT(std::abs(r.final_field[1] - std::polar(1.0, -0.5) * 0.5), 1e-10);
  EXPECT_LE(conservation_report(r), 1e-13);
}

TEST(Evolve, TimeZeroIsIdentity) {
  const TorusField u0 = gaussian_draw(1.5, 16, 1);
  const FlowResult r = evolve(u0, config(16, 0.0), Grid::for_extent(16));
  EXPECT_EQ(r.final_field, u0);
  EXPECT_EQ(r.steps, 0);
}

TEST(Evolve, Reversible) {
  const TorusField u0 = gaussian_draw(1.5, 32, 2);
  const Grid grid = Grid::for_extent(32);
  const FlowResult fwd = evolve(u0, config(32, 1.0), grid);
  const FlowResult back = evolve(fwd.final_field, config(32, -1.0, fwd.dt), grid);
  EXPECT_LT(std::sqrt(sobolev_norm_sq(back.final_field - u0, 0.5)), 1e-8);
}

TEST(Evolve, GroupProperty) {
  const TorusField u0 = gaussian_draw(1.5, 24, 3);
  const Grid grid = Grid::for_extent(24);
  const double dt = 1e-3;
  const TorusField whole = evolve(u0, config(24, 0.6, dt), grid).final_field;
  const TorusField half = evolve(u0, config(24, 0.3, dt), grid).final_field;
  const TorusField twice = evolve(half, config(24, 0.3, dt), grid).final_field;
  EXPECT_LT(max_abs_diff(whole, twice), 1e-12);
}

TEST(Evolve, HighModesKeepModulus) {
  const TorusField u0 = gaussian_draw(1.5, 64, 4);
  const FlowResult r = evolve(u0, config(16, 1.0), Grid::for_extent(16));
  ASSERT_EQ(r.final_field.extent(), 64);
  for (int n = 17; n <= 64; ++n) EXPECT_NEAR(std::abs(r.final_field[n]), std::abs(u0[n]), 1e-14 * (1 + std::abs(u0[n])));
}

TEST(Evolve, NonlinearityReachesModesAboveInitialExtent) {
  const TorusField u0 = TorusField::mode(1, 1, 0.5);
  const FlowResult r = evolve(u0, config(4, 1.0), Grid::for_extent(4));
  EXPECT_EQ(r.final_field.extent(), 4);
  EXPECT_GT(std::abs(r.final_field[2]), 1e-3);
}

TEST(Evolve, ConservesEnergyOnGaussianDraw) {
  const TorusField u0 = gaussian_draw(1.5, 64, 5);
  const FlowResult r = evolve(u0, config(64, 1.0), Grid::for_extent(64));
  EXPECT_LE(conservation_report(r), 1e-9);
}

TEST(Evolve, SnapshotsSpanHorizon) {
  const TorusField u0 = gaussian_draw(1.5, 16, 6);
  FlowConfig c = config(16, 0.5, 0.01);
  c.snapshots = 5;
  const FlowResult r = evolve(u0, c, Grid::for_extent(16));
  ASSERT_EQ(r.trajectory.size(), 6u);
  EXPECT_EQ(r.trajectory.front().field, u0);
  EXPECT_NEAR(r.trajectory.back().t, 0.5, 1e-15);
  EXPECT_EQ(r.trajectory.back().field, r.final_field);
  for (const auto& snap : r.trajectory) EXPECT_NEAR(snap.energy, energy(u0), 1e-9 * energy(u0));
}

TEST(Evolve, DefaultStepMeetsDriftBudget) {
  const GaussianSampler sampler(GaussianSpec{SobolevIndex(1.5), 64});
  for (int i = 0; i < 20; ++i) {
    const FlowResult r = evolve(sampler.draw(SeedPlan{7, 0}, i), config(64, 1.0), Grid::for_extent(64));
    EXPECT_LE(r.max_drift, 1e-9);
    EXPECT_LE(r.dt, 0.01);
  }
}

TEST(Evolve, ExplicitStepIsNotRefined) {
  const TorusField u0 = gaussian_draw(1.5, 16, 2, 7);
  FlowConfig c = config(16, 1.0, 0.01);
  c.check_energy = false;
  const FlowResult r = evolve(u0, c, Grid::for_extent(16));
  EXPECT_EQ(r.steps, 100);
}

TEST(Evolve, RejectsBadStep) {
  const TorusField u0 = gaussian_draw(1.5, 8, 7);
  for (double dt : {0.0, -0.1, std::nan("")}) {
    try {
      evolve(u0, config(8, 1.0, dt), Grid::for_extent(8));
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::StepSizeInvalid);
    }
  }
}

TEST(Evolve, RefusesLargeDrift) {
  // A step far beyond the stability region cannot conserve energy.
  const TorusField u0 = 20.0 * gaussian_draw(1.5, 32, 8);
  try {
    evolve(u0, config(32, 1.0, 0.5), Grid::for_extent(32));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EnergyDriftExceeded);
  }
}

TEST(Evolve, FourthOrderConvergence) {
  // Energy drift at fixed horizon, dt halved repeatedly in the asymptotic range.
  const TorusField u0 = gaussian_draw(1.5, 16, 9);
  const Grid grid = Grid::for_extent(16);
  std::vector<double> lx, ly;
  for (double dt : {0.05, 0.025, 0.0125, 0.00625}) {
    FlowConfig c = config(16, 1.0, dt);
    c.check_energy = false;
    lx.push_back(std::log(dt));
    ly.push_back(std::log(evolve(u0, c, grid).max_drift));
  }
  const double mx = (lx[0] + lx[1] + lx[2] + lx[3]) / 4, my = (ly[0] + ly[1] + ly[2] + ly[3]) / 4;
  double sxy = 0, sxx = 0;
  for (int i = 0; i < 4; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  EXPECT_NEAR(sxy / sxx, 4.0, 0.3);
}

TEST(VolumeProbe, TimeZero) { EXPECT_EQ(volume_probe(gaussian_draw(1.5, 8, 10), 8, 0.0, Grid::for_extent(8)), 0.0); }

TEST(VolumeProbe, NonlinearFlowPreservesVolume) {
  const TorusField u0 = gaussian_draw(1.5, 8, 11);
  EXPECT_LE(std::abs(volume_probe(u0, 8, 0.5, Grid::for_extent(8))), 1e-6);
}

TEST(VolumeProbe, LinearFlowIsRotation) {
  const TorusField u0 = gaussian_draw(1.5, 8, 12);
  EXPECT_LE(std::abs(volume_probe(u0, 8, 0.5, Grid::for_extent(8), false)), 1e-12);
}

TEST(VolumeProbe, RequiresSupportInEN) {
  EXPECT_THROW(volume_probe(gaussian_draw(1.5, 12, 13), 8, 0.5, Grid::for_extent(8)), Error);
}
