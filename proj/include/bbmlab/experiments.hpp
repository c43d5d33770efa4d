#pragma once

// Monte Carlo experiments on gamma_s and its energy-ball restriction:
// tails and moments of F_N and of the norms that control it, hypercontractive
// growth of F_N - F_M, the finite-dimensional change of variables and the
// transport of sets by the truncated flow.
//
// All gamma~_s expectations are unnormalized: E[X 1_{E[u] <= R}] over all draws.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bbmlab/energy_derivative.hpp"
#include "bbmlab/error.hpp"
#include "bbmlab/field.hpp"
#include "bbmlab/flow.hpp"
#include "bbmlab/parallel.hpp"
#include "bbmlab/sampler.hpp"
#include "bbmlab/stats.hpp"
#include "bbmlab/wick.hpp"

namespace bbm {

/// Sampling cutoff for experiments that need the full-field energy.
inline constexpr int kMcSampleCutoff = 512;

inline double upsilon(double s) { return std::min(0.5, (2.0 * s - 1.0) / 4.0); }

// ---------------------------------------------------------------------------
// Observables of P_N u on the energy ball

struct ObservableRequest {
  bool f = true;       // F_N
  bool dx_inf = true;  // ||d_x P_N u||_inf
  bool hs = true;      // ||P_N u||_{H^s}
};

struct ObservableSet {
  int N = 0;
  double s = 0.0, R = 0.0;
  std::uint64_t seed = 0;
  std::vector<char> accepted;
  std::vector<double> f, dx_inf, hs;  // zero for rejected draws
  std::size_t size() const { return accepted.size(); }
};

inline ObservableSet collect_observables(int N, double s, double R, std::size_t n, const SeedPlan& plan,
                                         ObservableRequest what = {}, int k_sample = kMcSampleCutoff) {
  SobolevIndex(s).require_flow();
  require(N >= 1 && k_sample >= N, Errc::ConfigInvalid, "need 1 <= N <= sampling cutoff");
  const GaussianSampler sampler(GaussianSpec{SobolevIndex(s), k_sample});
  const Grid grid = Grid::for_extent(N);
  const auto weights = direct_weights(N, s);
  ObservableSet out;
  out.N = N;
  out.s = s;
  out.R = R;
  out.seed = plan.master_seed;
  out.accepted.assign(n, 0);
  if (what.f) out.f.assign(n, 0.0);
  if (what.dx_inf) out.dx_inf.assign(n, 0.0);
  if (what.hs) out.hs.assign(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    const RestrictedDraw d = draw_restricted(sampler, R, plan, i);
    if (!d.accepted) return;
    out.accepted[i] = 1;
    const TorusField v = truncate(d.field, N);
    if (what.f) out.f[i] = f_total_direct(v, N, weights, grid);
    if (what.dx_inf) out.dx_inf[i] = linf_norm(x_derivative(v), grid);
    if (what.hs) out.hs[i] = std::sqrt(sobolev_norm_sq(v, s));
  });
  return out;
}

/// Energy radius at the q-quantile of E[u] under gamma_s.
inline double energy_quantile(double s, double q, const SeedPlan& plan, int n_cal = 20000, int k_sample = kMcSampleCutoff) {
  return calibrate_R(GaussianSpec{SobolevIndex(s), k_sample}, q, n_cal, plan);
}

inline constexpr int kTailGridPoints = 32;

inline TailCurve tail_fn(const ObservableSet& obs) {
  require(!obs.f.empty(), Errc::InvalidArgument, "F_N was not collected");
  std::vector<double> a(obs.f.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(obs.f[i]);
  return survival_curve("|F_N|", a, obs.accepted, kTailGridPoints, obs.seed);
}

/// Survival of X >= t^kappa, i.e. of X^{1/kappa} >= t.
inline TailCurve power_tail(std::string name, const std::vector<double>& x, const std::vector<char>& acc, double kappa,
                            std::uint64_t seed, double t_floor) {
  require(kappa > 0.0, Errc::InvalidArgument, "kappa must be positive");
  std::vector<double> a(x.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::pow(x[i], 1.0 / kappa);
  return survival_curve(std::move(name), a, acc, kTailGridPoints, seed, t_floor);
}

inline TailCurve tail_dx_inf(const ObservableSet& obs, double kappa) {
  require(!obs.dx_inf.empty(), Errc::InvalidArgument, "||d_x P_N u||_inf was not collected");
  return power_tail("||d_x P_N u||_inf", obs.dx_inf, obs.accepted, kappa, obs.seed, -1.0);
}

/// Threshold above which the H^s tail bound is stated: t >~ (ln N)^{2/kappa}.
inline double hs_validity_threshold(int N, double kappa) { return std::pow(std::log(static_cast<double>(N)), 2.0 / kappa); }

/// With restrict_to_validity the fit only uses t above hs_validity_threshold.
inline TailCurve tail_hs(const ObservableSet& obs, double kappa, bool restrict_to_validity) {
  require(!obs.hs.empty(), Errc::InvalidArgument, "||P_N u||_{H^s} was not collected");
  return power_tail("||P_N u||_{H^s}", obs.hs, obs.accepted, kappa, obs.seed,
                    restrict_to_validity ? hs_validity_threshold(obs.N, kappa) : -1.0);
}

inline TailCurve tail_fn(int N, double s, double R, std::size_t n, const SeedPlan& plan) {
  return tail_fn(collect_observables(N, s, R, n, plan, {true, false, false}));
}
inline TailCurve tail_dx_inf(int N, double s, double R, double kappa, std::size_t n, const SeedPlan& plan) {
  return tail_dx_inf(collect_observables(N, s, R, n, plan, {false, true, false}), kappa);
}
inline TailCurve tail_hs(int N, double s, double R, double kappa, std::size_t n, const SeedPlan& plan,
                         bool restrict_to_validity = true) {
  return tail_hs(collect_observables(N, s, R, n, plan, {false, false, true}), kappa, restrict_to_validity);
}

/// Exponents the tail bounds predict: 2 s kappa and 4 kappa s / (2s - 1).
inline double predicted_dx_inf_exponent(double s, double kappa) { return 2.0 * s * kappa; }
inline double predicted_hs_exponent(double s, double kappa) { return 4.0 * kappa * s / (2.0 * s - 1.0); }

// ---------------------------------------------------------------------------
// Moments

struct MomentRow {
  double p = 0.0;
  double norm = 0.0;        // unnormalized L^p norm
  double std_error = 0.0;
  double cv = 0.0;          // bootstrap CV of the raw moment
  double normalized = 0.0;  // L^p norm under the normalized restriction
};

struct MomentTable {
  std::vector<MomentRow> rows;
  double mass = 1.0;
  double max_over_p = 0.0;        // max_p norm / p
  double min_over_p = 0.0;        // min_p norm / p
  double p_exponent = 0.0;        // slope of log norm against log p
  double ratio() const { return max_over_p / min_over_p; }

  /// max_p (norm + 2se)/p over min_p (norm - 2se)/p.
  double ratio_upper() const {
    double hi = 0.0, lo = std::numeric_limits<double>::infinity();
    for (const auto& r : rows) {
      hi = std::max(hi, (r.norm + 2.0 * r.std_error) / r.p);
      lo = std::min(lo, (r.norm - 2.0 * r.std_error) / r.p);
    }
    return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  }

  /// Steepest p-exponent with every norm moved by 2 standard errors.
  double p_exponent_upper() const {
    std::vector<double> p, v, se;
    for (const auto& r : rows) p.push_back(r.p), v.push_back(r.norm), se.push_back(r.std_error);
    return rows.size() >= 2 ? loglog_slope_shifted(p, v, se, 2.0, true) : 0.0;
  }
};

inline constexpr double kMaxMomentCv = 0.25;

inline MomentTable moment_table(const std::vector<double>& x, const std::vector<char>* acc, const std::vector<double>& p_grid,
                                std::uint64_t seed) {
  require(!p_grid.empty(), Errc::InvalidArgument, "empty p grid");
  for (double p : p_grid) require(p >= 1.0 && p <= 12.0, Errc::ConfigInvalid, "p must lie in [1, 12]");
  MomentTable t;
  if (acc) {
    std::size_t k = 0;
    for (char a : *acc) k += a ? 1 : 0;
    t.mass = static_cast<double>(k) / static_cast<double>(acc->size());
  }
  std::vector<double> lp, ln;
  t.min_over_p = std::numeric_limits<double>::infinity();
  for (double p : p_grid) {
    const MomentEstimate m = lp_moment(x, acc, p, seed);
    t.rows.push_back({p, m.norm, m.std_error, m.cv, m.norm / std::pow(t.mass, 1.0 / p)});
    t.max_over_p = std::max(t.max_over_p, m.norm / p);
    t.min_over_p = std::min(t.min_over_p, m.norm / p);
    lp.push_back(p);
    ln.push_back(m.norm);
  }
  const auto top = std::max_element(t.rows.begin(), t.rows.end(), [](auto& a, auto& b) { return a.p < b.p; });
  if (top->cv > kMaxMomentCv)
    throw Error(Errc::MomentUnstable, "bootstrap CV " + std::to_string(top->cv) + " of the p = " + std::to_string(top->p) +
                                          " moment exceeds 25%");
  if (lp.size() >= 2) t.p_exponent = loglog_slope(lp, ln);
  return t;
}

/// ||F_N||_{L^p(gamma~_s)} over p_grid.
inline MomentTable lp_growth(const ObservableSet& obs, const std::vector<double>& p_grid) {
  require(!obs.f.empty(), Errc::InvalidArgument, "F_N was not collected");
  return moment_table(obs.f, &obs.accepted, p_grid, obs.seed);
}

inline MomentTable lp_growth(int N, double s, double R, const std::vector<double>& p_grid, std::size_t n, const SeedPlan& plan) {
  return lp_growth(collect_observables(N, s, R, n, plan, {true, false, false}), p_grid);
}

/// Samples of F_N - F_M under unrestricted gamma_s (modes above max(N, M)
/// do not enter, so draws stop there).
inline std::vector<double> difference_samples(int N, int M, double s, std::size_t n, const SeedPlan& plan) {
  require(N != M && N >= 1 && M >= 0, Errc::InvalidArgument, "need distinct N, M");
  const int hi = std::max(N, M), lo = std::min(N, M);
  const GaussianSampler sampler(GaussianSpec{SobolevIndex(s), hi});
  const Grid grid = Grid::for_extent(hi);
  const auto wh = direct_weights(hi, s);
  return parallel_map<double>(n, [&](std::size_t i) {
    const TorusField u = sampler.draw(plan, i);
    const double fh = f_total_direct(u, hi, wh, grid);
    const double fl = lo == 0 ? 0.0 : f_total_direct(u, lo, std::span<const double>(wh).first(static_cast<std::size_t>(lo)), grid);
    return N > M ? fh - fl : fl - fh;
  });
}

struct HyperGrowth {
  int N = 0, M = 0;
  double s = 0.0;
  MomentTable moments;
  double exact_l2 = 0.0;  // Wick oracle value of ||F_N - F_M||_{L^2}
};

inline HyperGrowth hyper_growth(int N, int M, double s, const std::vector<double>& p_grid, std::size_t n, const SeedPlan& plan) {
  SobolevIndex(s).require_measure();
  HyperGrowth h;
  h.N = N;
  h.M = M;
  h.s = s;
  h.moments = moment_table(difference_samples(N, M, s, n, plan), nullptr, p_grid, plan.master_seed);
  const TrilinearSymbol tot = TrilinearSymbol::make(SymbolTerm::Total, s);
  h.exact_l2 = std::sqrt(wick_variance(tot, tot, s, std::max(N, M), std::min(N, M)).total);
  return h;
}

struct HyperDecay {
  double s = 0.0;
  std::vector<double> p;
  std::vector<int> N;                          // smaller index of each pair (N, 2N)
  std::vector<std::vector<double>> norm, std_error;  // [p][N]
  std::vector<double> slope;                   // per p
  std::vector<double> slope_upper;             // per p, flattest line within 2 standard errors
  double predicted = 0.0;                      // -upsilon
};

/// ||F_{2N} - F_N||_{L^p(gamma_s)} over dyadic N: the decay in the smaller
/// truncation index, every p from the same draws.
inline HyperDecay hyper_decay(const std::vector<int>& Ns, double s, const std::vector<double>& ps, std::size_t n,
                              const SeedPlan& plan) {
  HyperDecay d;
  d.s = s;
  d.p = ps;
  d.N = Ns;
  d.norm.assign(ps.size(), {});
  d.std_error.assign(ps.size(), {});
  std::vector<double> x;
  for (int N : Ns) {
    const auto v = difference_samples(2 * N, N, s, n, plan.substream(static_cast<std::uint64_t>(N)));
    for (std::size_t k = 0; k < ps.size(); ++k) {
      const MomentEstimate m = lp_moment(v, nullptr, ps[k], plan.master_seed, 20);
      d.norm[k].push_back(m.norm);
      d.std_error[k].push_back(m.std_error);
    }
    x.push_back(N);
  }
  for (std::size_t k = 0; k < ps.size(); ++k) {
    d.slope.push_back(loglog_slope(x, d.norm[k]));
    d.slope_upper.push_back(loglog_slope_shifted(x, d.norm[k], d.std_error[k], 2.0, true));
  }
  d.predicted = -upsilon(s);
  return d;
}

// ---------------------------------------------------------------------------
// Sets, flows and the change of variables

/// A set in phase space, tested on the full field.
struct SetSpec {
  enum class Kind { Full, H12Ball, ModeBox } kind = Kind::Full;
  double radius = 0.0;  // H12Ball: ||u||_{H^{1/2}} <= radius
  int mode = 1;         // ModeBox: lo <= Re c(mode) <= hi
  double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();

  static SetSpec full() { return {}; }
  static SetSpec h12_ball(double r) { return {Kind::H12Ball, r}; }
  static SetSpec mode_box(int n, double lo, double hi) { return {Kind::ModeBox, 0.0, n, lo, hi}; }

  bool contains(const TorusField& u) const {
    switch (kind) {
      case Kind::Full: return true;
      case Kind::H12Ball: return sobolev_norm_sq(u, 0.5) <= radius * radius;
      case Kind::ModeBox: {
        const double x = u[mode].real();
        return x >= lo && x <= hi;
      }
    }
    return false;
  }

  std::string describe() const {
    switch (kind) {
      case Kind::Full: return "full";
      case Kind::H12Ball: return "h12_ball(r=" + std::to_string(radius) + ")";
      case Kind::ModeBox: return "mode_box(n=" + std::to_string(mode) + ",[" + std::to_string(lo) + "," + std::to_string(hi) + "])";
    }
    return "?";
  }
};

namespace detail {

inline FlowResult flow_or_throw(const TorusField& u, int N, double t, const Grid& grid, int snapshots = 0) {
  FlowConfig cfg;
  cfg.N = N;
  cfg.t_end = t;
  cfg.snapshots = snapshots;
  try {
    return evolve(u, cfg, grid);
  } catch (const Error& e) {
    if (e.code() == Errc::EnergyDriftExceeded) throw Error(Errc::FlowToleranceExceeded, e.what());
    throw;
  }
}

}  // namespace detail

struct CovIdentity {
  McEstimate lhs;  // gamma~_s(Phi_t(A)) via the backward flow
  McEstimate rhs;  // int_A exp(||P_N u||^2 - ||P_N Phi_t u||^2) dgamma~_s, forward
  double z = 0.0;  // |lhs - rhs| in joint standard errors
  WeightDiagnostics weights;  // of the rhs draws; a large pareto_k makes z unreliable
};

/// Change of variables for the truncated flow. The density of gamma_s on the
/// modes <= N is proportional to exp(-sum_{n=1}^N n^{2s+1}|c(n)|^2), i.e.
/// exp(-||P_N u||^2_{H^{s+1/2}}) with the one-sided norm, and Phi_t^N
/// preserves volume, so gamma(Phi_t A) = int_A exp(||P_N u||^2 - ||P_N Phi_t u||^2).
/// lhs and rhs use independent streams of the plan.
inline CovIdentity cov_identity(int N, double s, double R, double t, const SetSpec& A, std::size_t n, const SeedPlan& plan,
                                int k_sample = kMcSampleCutoff) {
  SobolevIndex(s).require_flow();
  const GaussianSampler sampler(GaussianSpec{SobolevIndex(s), k_sample});
  const Grid grid = Grid::for_extent(N);
  const SeedPlan back = plan.substream(1), fwd = plan.substream(2);
  const auto l = parallel_map<double>(n, [&](std::size_t i) {
    const RestrictedDraw d = draw_restricted(sampler, R, back, i);
    if (!d.accepted) return 0.0;
    if (t == 0.0) return A.contains(d.field) ? 1.0 : 0.0;
    return A.contains(detail::flow_or_throw(d.field, N, -t, grid).final_field) ? 1.0 : 0.0;
  });
  const auto r = parallel_map<double>(n, [&](std::size_t i) {
    const RestrictedDraw d = draw_restricted(sampler, R, fwd, i);
    if (!d.accepted || !A.contains(d.field)) return 0.0;
    if (t == 0.0) return 1.0;
    const TorusField ut = detail::flow_or_throw(d.field, N, t, grid).final_field;
    const double e0 = sobolev_norm_sq(truncate(d.field, N), s + 0.5);
    const double et = sobolev_norm_sq(truncate(ut, N), s + 0.5);
    return std::exp(e0 - et);
  });
  CovIdentity out;
  out.lhs = mc_mean(l, plan.master_seed);
  out.rhs = mc_mean(r, plan.master_seed);
  out.z = z_score(out.lhs, out.rhs);
  out.weights = weight_diagnostics(r);
  return out;
}

/// Radius of the H^{1/2} ball holding a fraction q of gamma_s.
inline double h12_quantile(double s, double q, const SeedPlan& plan, int n_cal = 20000, int k_sample = kMcSampleCutoff) {
  require(q > 0.0 && q < 1.0, Errc::InvalidArgument, "quantile must lie in (0, 1)");
  const GaussianSampler sampler(GaussianSpec{SobolevIndex(s), k_sample});
  const SeedPlan cal = plan.substream(0x412);
  std::vector<double> r(static_cast<std::size_t>(n_cal));
  for (int i = 0; i < n_cal; ++i) r[static_cast<std::size_t>(i)] = std::sqrt(sobolev_norm_sq(sampler.draw(cal, static_cast<std::uint64_t>(i)), 0.5));
  std::sort(r.begin(), r.end());
  return r[static_cast<std::size_t>(std::clamp(std::ceil(q * n_cal), 1.0, double(n_cal))) - 1];
}

struct TransportRow {
  double t = 0.0;
  McEstimate mass;  // gamma~_s(Phi_t(A))
};

struct TransportGrowth {
  std::vector<TransportRow> rows;  // t = 0, T/k, ..., T
  double total_mass = 0.0;         // gamma~_s of the whole space
  /// Smallest C >= 1 with log m(t) <= C^{-|t|} log m(0) for all t > 0
  /// (the transported-mass bound, an upper envelope).
  double c_upper = 1.0;
  /// Smallest C >= 1 with log m(t) >= C^{|t|} log m(0) for all t > 0, the
  /// same bound applied to Phi_{-t} and the set Phi_t(A).
  double c_lower = 1.0;
  bool envelopes_exist() const { return std::isfinite(c_upper) && std::isfinite(c_lower); }
  /// Density exponent p(t) = (1 - e^{-|t| ln C})^{-1} for C = c_upper.
  double density_exponent(double t) const {
    const double a = 1.0 - std::exp(-std::abs(t) * std::log(c_upper));
    return a > 0.0 ? 1.0 / a : std::numeric_limits<double>::infinity();
  }
};

/// Transported mass over t in {0, t_max/k, ..., t_max} from one backward
/// trajectory per draw. Throws MassOutOfRange unless gamma~_s(A) lies in [1e-3, 0.3].
inline TransportGrowth transport_growth(int N, double s, double R, const SetSpec& A, double t_max, int k, std::size_t n,
                                        const SeedPlan& plan, int k_sample = kMcSampleCutoff) {
  SobolevIndex(s).require_flow();
  require(k >= 1 && t_max > 0.0, Errc::InvalidArgument, "need a positive horizon and k >= 1 intervals");
  const GaussianSampler sampler(GaussianSpec{SobolevIndex(s), k_sample});
  const Grid grid = Grid::for_extent(N);
  const std::size_t K = static_cast<std::size_t>(k) + 1;
  std::vector<std::vector<double>> hits(K, std::vector<double>(n, 0.0));
  std::vector<double> acc(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    const RestrictedDraw d = draw_restricted(sampler, R, plan, i);
    if (!d.accepted) return;
    acc[i] = 1.0;
    const FlowResult r = detail::flow_or_throw(d.field, N, -t_max, grid, k);
    for (std::size_t j = 0; j < K; ++j) hits[j][i] = A.contains(r.trajectory[j].field) ? 1.0 : 0.0;
  });
  TransportGrowth out;
  out.total_mass = mc_mean(acc).mean;
  for (std::size_t j = 0; j < K; ++j) out.rows.push_back({t_max * static_cast<double>(j) / k, mc_mean(hits[j], plan.master_seed)});
  const double m0 = out.rows.front().mass.mean;
  if (m0 < 1e-3 || m0 > 0.3) throw Error(Errc::MassOutOfRange, "gamma~(A) = " + std::to_string(m0) + " outside [1e-3, 0.3]");
  for (std::size_t j = 1; j < K; ++j) {
    const double mt = out.rows[j].mass.mean, t = out.rows[j].t;
    if (!(mt > 0.0 && mt < 1.0)) throw Error(Errc::MassOutOfRange, "transported mass left (0, 1)");
    const double q = std::log(m0) / std::log(mt);  // > 1 iff the mass grew
    if (q > 1.0) out.c_upper = std::max(out.c_upper, std::pow(q, 1.0 / t));
    if (q < 1.0) out.c_lower = std::max(out.c_lower, std::pow(1.0 / q, 1.0 / t));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Self-check of the tail machinery on plain Gaussians

struct ConcentrationReport {
  int d = 0;
  TailFit abs_single;     // |X_1|
  TailFit abs_single_exact;  // same fit on the exact survival erfc(t / sqrt 2)
  TailFit abs_sum;        // sum |X_i|
  TailFit chi_low;        // |sum X_i^2 - d| for lambda below d/2
  TailFit chi_high;       // |sum X_i^2 - d| for lambda at or above d/2
  TailCurve chi_curve;
};

inline ConcentrationReport concentration_selfcheck(int d, std::size_t n, std::uint64_t seed) {
  require(d >= 1, Errc::InvalidArgument, "d must be >= 1");
  const SeedPlan plan{seed, 0xC0C};
  std::vector<double> x1(n), sabs(n), chi(n);
  parallel_for(n, [&](std::size_t i) {
    auto eng = plan.engine(i);
    std::normal_distribution<double> g;
    double a = 0, q = 0, first = 0;
    for (int j = 0; j < d; ++j) {
      const double x = g(eng);
      if (j == 0) first = x;
      a += std::abs(x);
      q += x * x;
    }
    x1[i] = std::abs(first);
    sabs[i] = a;
    chi[i] = std::abs(q - d);
  });
  const std::vector<char> all(n, 1);
  ConcentrationReport r;
  r.d = d;
  const TailCurve single = survival_curve("|X|", x1, all, kTailGridPoints, seed);
  r.abs_single = single.fit;
  std::vector<TailPoint> exact;
  for (const auto& p : single.points) {
    const double q = std::erfc(p.t / std::sqrt(2.0));
    exact.push_back({p.t, q, q, q, static_cast<std::size_t>(std::llround(q * static_cast<double>(n)))});
  }
  r.abs_single_exact = fit_tail(exact, n, -1.0, seed);
  r.abs_sum = survival_curve("sum |X_i|", sabs, all, kTailGridPoints, seed).fit;
  r.chi_curve = survival_curve("|sum X_i^2 - d|", chi, all, kTailGridPoints, seed);
  std::vector<TailPoint> low, high;
  for (const auto& p : r.chi_curve.points) (p.t < d / 2.0 ? low : high).push_back(p);
  auto fit_or_empty = [&](const std::vector<TailPoint>& pts) {
    try {
      return fit_tail(pts, n, -1.0, seed);
    } catch (const Error&) {
      return TailFit{};
    }
  };
  r.chi_low = fit_or_empty(low);
  r.chi_high = fit_or_empty(high);
  return r;
}

}  // namespace bbm
