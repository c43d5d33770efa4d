#pragma once

// F_N(u) = d/dt ||P_N Phi_t^N u||^2_{H^{s+1/2}} at t = 0, evaluated
//   - in physical space, term by term (f1/f2/f3_physical),
//   - as spectral sums over zero-sum triples (f_spectral),
//   - by a central difference along the flow (f_total_fd),
//   - directly from the vector field (f_total_direct), the fast path used by
//     the Monte Carlo experiments.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "bbmlab/error.hpp"
#include "bbmlab/field.hpp"
#include "bbmlab/flow.hpp"
#include "bbmlab/symbols.hpp"

namespace bbm {

namespace detail {

// Band-limited pieces shared by the physical evaluators, on a grid exact for
// cubic integrands in band-N fields.
struct PhysicalTerms {
  int G;
  TorusField v;               // P_N u, extent N
  std::vector<double> ds_v;   // |D|^s v
  std::vector<double> v_x;    // d_x v

  PhysicalTerms(const TorusField& u, int N, double s, const Grid& grid) : G(grid.points), v(u.with_extent(N)) {
    require(N >= 1, Errc::InvalidArgument, "truncation N must be >= 1");
    grid.require_exact(3 * N, "cubic integrand");
    ds_v = to_physical(frac_derivative(v, s), G);
    v_x = to_physical(x_derivative(v), G);
  }

  // Exact Fourier coefficients of f*g for band-N f, g (band 2N).
  TorusField quadratic(const TorusField& f, const TorusField& g) const {
    const int N = v.extent();
    return product(f, g, Grid::for_extent(2 * N), 2 * N).field;
  }

  double integral_with_ds_v(const std::vector<double>& w) const {
    std::vector<double> prod(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) prod[j] = ds_v[j] * w[j];
    return integrate(prod);
  }
};

}  // namespace detail

/// F1 = (1/2pi) int (|D|^s P_N u)^2 d_x P_N u.
inline double f1_physical(const TorusField& u, int N, double s, const Grid& grid) {
  const detail::PhysicalTerms t(u, N, s, grid);
  std::vector<double> w(t.v_x);
  for (std::size_t j = 0; j < w.size(); ++j) w[j] *= t.ds_v[j];
  return t.integral_with_ds_v(w) / kTwoPi;
}

/// F2 = -(1/pi) int (|D|^s P_N u) [|D|^s, P_N u] d_x P_N u, the commutator
/// evaluated as |D|^s (v v_x) - v |D|^s v_x.
inline double f2_physical(const TorusField& u, int N, double s, const Grid& grid) {
  const detail::PhysicalTerms t(u, N, s, grid);
  const TorusField vx = x_derivative(t.v);
  const auto first = to_physical(frac_derivative(t.quadratic(t.v, vx), s), t.G);
  const auto v_phys = to_physical(t.v, t.G);
  const auto ds_vx = to_physical(frac_derivative(vx, s), t.G);
  std::vector<double> comm(first.size());
  for (std::size_t j = 0; j < comm.size(); ++j) comm[j] = first[j] - v_phys[j] * ds_vx[j];
  return -t.integral_with_ds_v(comm) / kPi;
}

/// F3 = (1/2pi) int (|D|^s P_N u) (d_x |D|^s / (1 + |D|)) (P_N u)^2.
inline double f3_physical(const TorusField& u, int N, double s, const Grid& grid) {
  const detail::PhysicalTerms t(u, N, s, grid);
  const TorusField sq = t.quadratic(t.v, t.v);
  const TorusField op = apply_multiplier(sq, [&](int n) { return cplx(0.0, n) * std::pow(n, s) / (1.0 + n); });
  return t.integral_with_ds_v(to_physical(op, t.G)) / kTwoPi;
}

struct FTerms {
  double f1 = 0.0, f2 = 0.0, f3 = 0.0;
  double total() const { return f1 + f2 + f3; }
};

inline FTerms f_physical(const TorusField& u, int N, double s, const Grid& grid) {
  return {f1_physical(u, N, s, grid), f2_physical(u, N, s, grid), f3_physical(u, N, s, grid)};
}

struct SpectralValue {
  double value = 0.0;     // Re(i S), the form itself
  double residue = 0.0;   // Im(i S), zero for odd symbols
  double magnitude = 0.0; // sum of |terms|, the scale of the rounding error
};

/// i * sum_{n in A_{N,M}} w(n) c(n1) c(n2) c(n3), by direct O(N^2) summation.
inline SpectralValue f_spectral_detail(const TorusField& u, int N, int M, const SymbolEvaluator& w) {
  if (M >= N) return {};
  double re = 0.0, im = 0.0, mag = 0.0;
  for (int n1 = -N; n1 <= N; ++n1) {
    if (n1 == 0) continue;
    const cplx c1 = u[n1];
    if (c1 == cplx{}) continue;
    double row_re = 0.0, row_im = 0.0, row_mag = 0.0;
    const int lo = std::max(-N, -N - n1), hi = std::min(N, N - n1);
    for (int n2 = lo; n2 <= hi; ++n2) {
      const int n3 = -n1 - n2;
      if (n2 == 0 || n3 == 0) continue;
      if (std::max({std::abs(n1), std::abs(n2), std::abs(n3)}) <= M) continue;
      const cplx term = w(n1, n2, n3) * (u[n2] * u[n3]);
      row_re += term.real();
      row_im += term.imag();
      row_mag += std::abs(term);
    }
    const cplx row = c1 * cplx(row_re, row_im);
    re += row.real();
    im += row.imag();
    mag += std::abs(c1) * row_mag;
  }
  // i (re + i im) = -im + i re
  return {-im, re, mag};
}

inline double f_spectral(const TorusField& u, int N, int M, double s, const TrilinearSymbol& symbol) {
  TrilinearSymbol sym = symbol;
  sym.s = s;
  return f_spectral_detail(u, N, M, SymbolEvaluator(sym, N)).value;
}

/// F_N read off the vector field:
/// 2 sum_{n=1}^N n^{2s+2} / (1+n) Im(conj(c(n)) B(n)), B = P_N((P_N u)^2).
inline double f_total_direct(const TorusField& u, int N, double s, const Grid& grid) {
  const TorusField b = quadratic_term(u, N, grid);
  double acc = 0.0;
  for (int n = 1; n <= N; ++n) {
    acc += std::pow(static_cast<double>(n), 2.0 * s + 2.0) / (1.0 + n) * (std::conj(u[n]) * b[n]).imag();
  }
  return 2.0 * acc;
}

/// Same as f_total_direct with the weights n^{2s+2}/(1+n) supplied.
inline double f_total_direct(const TorusField& u, int N, std::span<const double> weights, const Grid& grid) {
  const TorusField b = quadratic_term(u, N, grid);
  double acc = 0.0;
  for (int n = 1; n <= N; ++n) acc += weights[static_cast<std::size_t>(n - 1)] * (std::conj(u[n]) * b[n]).imag();
  return 2.0 * acc;
}

inline std::vector<double> direct_weights(int N, double s) {
  std::vector<double> w(static_cast<std::size_t>(N));
  for (int n = 1; n <= N; ++n) w[static_cast<std::size_t>(n - 1)] = std::pow(static_cast<double>(n), 2.0 * s + 2.0) / (1.0 + n);
  return w;
}

/// (||P_N Phi_h u||^2 - ||P_N Phi_{-h} u||^2) / 2h in H^{s+1/2}. Each side is
/// one integrating-factor RK4 step, whose local error O(h^5) is far below the
/// O(h^2) difference error.
inline double f_total_fd(const TorusField& u, int N, double s, double h, const Grid& grid) {
  require(h > 0.0, Errc::StepSizeInvalid, "finite-difference step must be positive");
  auto norm_at = [&](double t) {
    FlowConfig cfg;
    cfg.N = N;
    cfg.t_end = t;
    cfg.dt = h;
    cfg.check_energy = false;
    return sobolev_norm_sq(truncate(evolve(u, cfg, grid).final_field, N), s + 0.5);
  };
  return (norm_at(h) - norm_at(-h)) / (2.0 * h);
}

/// |F_N(u)| / (||P_N u||^2_{H^s} ||d_x P_N u||_inf).
inline double smoothing_ratio(const TorusField& u, int N, double s, const Grid& grid) {
  const TorusField v = truncate(u, N);
  const double denom = sobolev_norm_sq(v, s) * linf_norm(x_derivative(v), grid);
  if (!(denom > 0.0)) throw Error(Errc::ZeroField, "P_N u vanishes");
  return std::abs(f_physical(u, N, s, grid).total()) / denom;
}

}  // namespace bbm
