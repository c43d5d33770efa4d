#pragma once

// Truncated flow of  u_t + |D| u_t + u_x + d_x P_N((P_N u)^2) = 0.
//
// In Fourier variables, with w(n) = n / (1 + |n|),
//   d/dt c(n) = -i w(n) (c(n) + B(n)),  B = P_N((P_N u)^2),   |n| <= N,
//   d/dt c(n) = -i w(n) c(n),                                  |n| >  N.
// Modes above N rotate exactly. Modes up to N use Lawson's integrating-factor
// RK4: the linear phase exp(-i w t) is integrated exactly and classical RK4
// acts on the nonlinear remainder.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bbmlab/error.hpp"
#include "bbmlab/field.hpp"

namespace bbm {

struct FlowConfig {
  int N = 1;
  std::optional<double> dt;  // empty: default_step(u0, N)
  double t_end = 1.0;
  double tol_energy = 1e-9;  // relative drift per unit time
  int snapshots = 0;         // number of intervals between recorded states
  bool nonlinear = true;
  bool check_energy = true;
};

struct Snapshot {
  double t = 0.0;
  TorusField field;
  double energy = 0.0;
};

struct FlowResult {
  TorusField final_field;
  std::vector<Snapshot> trajectory;
  double max_drift = 0.0;  // max_k |E[u(t_k)] - E[u0]| / E[u0] over all steps
  long steps = 0;
  double dt = 0.0;
  double t_end = 0.0;
  double tol_energy = 0.0;
};

inline double dispersion(int n) { return static_cast<double>(n) / (1.0 + n); }

/// B = P_N((P_N u)^2) as a field of extent N.
inline TorusField quadratic_term(const TorusField& u, int N, const Grid& grid) {
  const TorusField low = u.with_extent(N);
  return product(low, low, grid, N).field;
}

/// Time derivative of u under the truncated flow; mode 0 is never produced.
inline TorusField vector_field(const TorusField& u, int N, const Grid& grid) {
  require(N >= 1, Errc::InvalidArgument, "truncation N must be >= 1");
  const int K = std::max(u.extent(), N);
  const TorusField b = quadratic_term(u, N, grid);
  TorusField out(K);
  auto c = out.coeffs();
  for (int n = 1; n <= K; ++n) {
    const cplx forcing = n <= N ? u[n] + b[n] : u[n];
    c[n - 1] = cplx(0.0, -dispersion(n)) * forcing;
  }
  return out;
}

/// Default step min(0.01, 1 / (4 max(1, ||d_x P_N u0||_inf))).
inline double default_step(const TorusField& u0, int N) {
  const TorusField low = truncate(u0, N);
  const double transport = linf_norm(x_derivative(low), Grid::for_extent(low.extent()));
  return std::min(0.01, 1.0 / (4.0 * std::max(1.0, transport)));
}

namespace detail {

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// Integrating-factor RK4 on the modes 1..N.
class LawsonStepper {
 public:
  LawsonStepper(int N, double h, const Grid& grid)
      : N_(N), grid_(grid), half_(static_cast<std::size_t>(N)), full_(static_cast<std::size_t>(N)) {
    for (int n = 1; n <= N; ++n) {
      half_[static_cast<std::size_t>(n - 1)] = std::polar(1.0, -dispersion(n) * h / 2);
      full_[static_cast<std::size_t>(n - 1)] = std::polar(1.0, -dispersion(n) * h);
    }
    h_ = h;
  }

  void step(TorusField& v) const {
    const double h = h_;
    const TorusField k1 = remainder(v);
    TorusField a = v;
    axpy(a, h / 2, k1);
    rotate(a, half_);
    const TorusField k2 = remainder(a);
    TorusField b = v;
    rotate(b, half_);
    axpy(b, h / 2, k2);
    const TorusField k3 = remainder(b);
    TorusField c = v;
    rotate(c, full_);
    TorusField k3r = k3;
    rotate(k3r, half_);
    axpy(c, h, k3r);
    const TorusField k4 = remainder(c);

    TorusField mid = k2;
    axpy(mid, 1.0, k3);
    rotate(mid, half_);
    TorusField k1r = k1;
    rotate(k1r, full_);
    rotate(v, full_);
    axpy(v, h / 6, k1r);
    axpy(v, h / 3, mid);
    axpy(v, h / 6, k4);
  }

 private:
  // -i w(n) B(n), the nonlinear part of the vector field on modes <= N.
  TorusField remainder(const TorusField& v) const {
    TorusField b = product(v, v, grid_, N_).field;
    auto c = b.coeffs();
    for (int n = 1; n <= N_; ++n) c[n - 1] *= cplx(0.0, -dispersion(n));
    return b;
  }

  static void rotate(TorusField& v, const std::vector<cplx>& phase) {
    auto c = v.coeffs();
    for (std::size_t i = 0; i < phase.size(); ++i) c[i] *= phase[i];
  }

  static void axpy(TorusField& y, double a, const TorusField& x) {
    auto cy = y.coeffs();
    auto cx = x.coeffs();
    for (std::size_t i = 0; i < cy.size(); ++i) cy[i] += a * cx[i];
  }

  int N_;
  Grid grid_;
  double h_ = 0.0;
  std::vector<cplx> half_;
  std::vector<cplx> full_;
};

}  // namespace detail

namespace detail {

inline FlowResult run_fixed_step(const TorusField& u0, const FlowConfig& cfg, double dt, const Grid& grid) {
  const int N = cfg.N;
  const int K = std::max(u0.extent(), N);
  const long steps = cfg.t_end == 0.0 ? 0 : static_cast<long>(std::ceil(std::abs(cfg.t_end) / dt - 1e-9));
  const double h = steps == 0 ? 0.0 : cfg.t_end / static_cast<double>(steps);

  FlowResult res;
  res.steps = steps;
  res.dt = std::abs(h);
  res.t_end = cfg.t_end;
  res.tol_energy = cfg.tol_energy;

  // Modes above N only rotate and keep their modulus, so they enter the energy
  // as a constant.
  double high_sq = 0.0;
  for (int n = N + 1; n <= u0.extent(); ++n) high_sq += (1.0 + n) * std::norm(u0[n]);
  auto total_energy = [&](const TorusField& low) {
    double acc = 0.0;
    for (int n = 1; n <= N; ++n) acc += (1.0 + n) * std::norm(low[n]);
    return std::sqrt(4.0 * kPi * (acc + high_sq));
  };

  TorusField low = u0.with_extent(N);
  const double e0 = energy(u0);
  auto assemble = [&](const TorusField& lo, double t) {
    TorusField u(K);
    auto c = u.coeffs();
    for (int n = 1; n <= N; ++n) c[n - 1] = lo[n];
    for (int n = N + 1; n <= K; ++n) c[n - 1] = u0[n] * std::polar(1.0, -dispersion(n) * t);
    return u;
  };

  std::vector<long> marks;
  if (cfg.snapshots > 0) {
    for (int k = 0; k <= cfg.snapshots; ++k) marks.push_back(std::lround(static_cast<double>(k) * steps / cfg.snapshots));
  }
  std::size_t next_mark = 0;
  auto record = [&](long step) {
    while (next_mark < marks.size() && marks[next_mark] == step) {
      const double t = static_cast<double>(step) * h;
      TorusField u = assemble(low, t);
      const double e = energy(u);
      res.trajectory.push_back(Snapshot{t, std::move(u), e});
      ++next_mark;
    }
  };

  const LawsonStepper stepper(N, h, grid);
  const TorusField low0 = low;
  record(0);
  for (long k = 1; k <= steps; ++k) {
    if (cfg.nonlinear) {
      stepper.step(low);
    } else {
      // Without the quadratic term every mode rotates; evaluate the phase at
      // t_k directly so no rounding accumulates.
      for (int n = 1; n <= N; ++n) low.at(n) = low0[n] * std::polar(1.0, -dispersion(n) * static_cast<double>(k) * h);
    }
    if (e0 > 0.0) res.max_drift = std::max(res.max_drift, std::abs(total_energy(low) - e0) / e0);
    record(k);
  }
  res.final_field = assemble(low, cfg.t_end);
  return res;
}

}  // namespace detail

/// Budget for the relative energy drift of a run: tol_energy per unit time,
/// with runs shorter than one time unit allowed the full tol_energy.
inline double drift_budget(const FlowConfig& cfg) { return cfg.tol_energy * std::max(std::abs(cfg.t_end), 1.0); }

/// Phi_t^N applied to u0. With an explicit dt the run fails if the energy
/// drift exceeds its budget. Without one, the default step is halved (at most
/// 8 times) until the budget holds.
inline FlowResult evolve(const TorusField& u0, const FlowConfig& cfg, const Grid& grid) {
  require(cfg.N >= 1, Errc::InvalidArgument, "truncation N must be >= 1");
  double dt = cfg.dt ? *cfg.dt : default_step(u0, cfg.N);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(Errc::StepSizeInvalid, "step size must be positive and finite");
  grid.require_exact(3 * cfg.N, "truncated flow");

  const int refinements = (cfg.dt || !cfg.check_energy || !cfg.nonlinear) ? 0 : 8;
  FlowResult res = detail::run_fixed_step(u0, cfg, dt, grid);
  for (int r = 0; r < refinements && res.max_drift > drift_budget(cfg); ++r) {
    dt /= 2;
    res = detail::run_fixed_step(u0, cfg, dt, grid);
  }
  if (cfg.check_energy && res.max_drift > drift_budget(cfg))
    throw Error(Errc::EnergyDriftExceeded, "relative energy drift " + detail::sci(res.max_drift) + " exceeds " +
                                               detail::sci(cfg.tol_energy) + " per unit time");
  return res;
}

/// Max relative energy drift of a run.
inline double conservation_report(const FlowResult& r) { return r.max_drift; }

/// log|det D Phi_t^N(u0)| on E_N, by finite differences in the 2N real
/// coordinates (Re c(n), Im c(n)), n = 1..N. Each Jacobian column uses the
/// fourth-order stencil (-f(2h) + 8 f(h) - 8 f(-h) + f(-2h)) / 12h with
/// h = 1e-3 (1 + ||u0||_{H^{1/2}}).
inline double volume_probe(const TorusField& u0, int N, double t, const Grid& grid, bool nonlinear = true) {
  for (int n = N + 1; n <= u0.extent(); ++n)
    require(u0[n] == cplx{}, Errc::InvalidArgument, "volume probe needs data supported on modes <= N");
  if (t == 0.0) return 0.0;
  const TorusField base = u0.with_extent(N);

  FlowConfig cfg;
  cfg.N = N;
  cfg.t_end = t;
  cfg.dt = default_step(base, N);
  cfg.nonlinear = nonlinear;
  cfg.check_energy = false;

  const double step = 1e-3 * (1.0 + std::sqrt(sobolev_norm_sq(base, 0.5)));
  const int dim = 2 * N;
  Eigen::MatrixXd jac(dim, dim);
  auto flowed = [&](int k, double offset) {
    TorusField u = base;
    const int n = k / 2 + 1;
    u.at(n) += (k % 2 == 0) ? cplx(offset, 0.0) : cplx(0.0, offset);
    const TorusField out = evolve(u, cfg, grid).final_field;
    Eigen::VectorXd v(dim);
    for (int m = 1; m <= N; ++m) {
      v(2 * (m - 1)) = out[m].real();
      v(2 * (m - 1) + 1) = out[m].imag();
    }
    return v;
  };
  for (int k = 0; k < dim; ++k) {
    jac.col(k) = (8.0 * (flowed(k, step) - flowed(k, -step)) - (flowed(k, 2 * step) - flowed(k, -2 * step))) /
                 (12.0 * step);
  }

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
  const auto& sv = svd.singularValues();
  const double cond = sv(0) / sv(dim - 1);
  if (!(cond <= 1e12)) throw Error(Errc::IllConditioned, "Jacobian condition estimate " + std::to_string(cond));
  double logdet = 0.0;
  for (int k = 0; k < dim; ++k) logdet += std::log(sv(k));
  return logdet;
}

}  // namespace bbm
