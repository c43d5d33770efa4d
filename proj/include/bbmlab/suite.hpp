#pragma once

// Gate battery shared by `bbmlab suite` and the acceptance binary. Every
// gate compares CI-adjusted estimates (or exact values) against a threshold.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "bbmlab/config.hpp"
#include "bbmlab/convolution.hpp"
#include "bbmlab/energy_derivative.hpp"
#include "bbmlab/experiments.hpp"
#include "bbmlab/flow.hpp"
#include "bbmlab/sampler.hpp"
#include "bbmlab/stats.hpp"
#include "bbmlab/symbols.hpp"
#include "bbmlab/wick.hpp"

namespace bbm {

struct GateResult {
  int criterion = 0;  // 1..8 for the acceptance battery, 0 for the quick gates
  std::string name;
  bool passed = false;
  std::string detail;
  std::vector<std::pair<std::string, double>> metrics;
  double seconds = 0.0;

  void metric(std::string key, double v) { metrics.emplace_back(std::move(key), v); }
};

struct SuiteOptions {
  std::uint64_t seed = kDefaultSeed;
  /// Term prefactors handed to the spectral evaluators; only the mutation
  /// test changes them.
  std::array<double, 3> coeff{1.0, -2.0, 1.0};
  /// Multiplies every Monte Carlo sample count.
  double scale = 1.0;

  std::size_t samples(std::size_t n) const {
    return std::max<std::size_t>(1000, static_cast<std::size_t>(std::llround(static_cast<double>(n) * scale)));
  }
  TrilinearSymbol symbol(SymbolTerm t, double s) const { return TrilinearSymbol{t, s, coeff}; }
};

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

/// Runs body(result); a module error fails the gate with its message.
inline GateResult run_gate(int criterion, std::string name, const std::function<void(GateResult&)>& body) {
  GateResult g;
  g.criterion = criterion;
  g.name = std::move(name);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(g);
  } catch (const Error& e) {
    g.passed = false;
    g.detail = std::string("error: ") + e.what();
  }
  g.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return g;
}

// ---------------------------------------------------------------------------
// 1. Decomposition identity

inline GateResult gate_decomposition(const SuiteOptions& o, int draws = 100) {
  return run_gate(1, "decomposition identity", [&](GateResult& g) {
    double worst_fd = 0.0, worst_fd_spec = 0.0, worst_rel = 0.0;
    const SeedPlan plan{o.seed, 0xDEC};
    for (double s : {1.2, 1.5, 2.0}) {
      for (int N : {16, 32, 64}) {
        const GaussianSampler sampler(GaussianSpec{SobolevIndex(s), N});
        const Grid grid = Grid::for_extent(N);
        const std::array<SymbolEvaluator, 3> ev{SymbolEvaluator(o.symbol(SymbolTerm::F1, s), N),
                                                SymbolEvaluator(o.symbol(SymbolTerm::F2, s), N),
                                                SymbolEvaluator(o.symbol(SymbolTerm::F3, s), N)};
        const SeedPlan sub = plan.substream(static_cast<std::uint64_t>(N) * 100 + static_cast<std::uint64_t>(s * 10));
        for (int i = 0; i < draws; ++i) {
          const TorusField u = sampler.draw(sub, static_cast<std::uint64_t>(i));
          const FTerms ph = f_physical(u, N, s, grid);
          const std::array<double, 3> phk{ph.f1, ph.f2, ph.f3};
          double spec_total = 0.0;
          for (std::size_t k = 0; k < 3; ++k) {
            const double sp = f_spectral_detail(u, N, 0, ev[k]).value;
            spec_total += sp;
            worst_rel = std::max(worst_rel, std::abs(phk[k] - sp) / std::abs(sp));
          }
          const double fd = f_total_fd(u, N, s, 1e-4, grid);
          const double scale = 1.0 + std::abs(ph.total());
          worst_fd = std::max(worst_fd, std::abs(fd - ph.total()) / scale);
          worst_fd_spec = std::max(worst_fd_spec, std::abs(fd - spec_total) / scale);
        }
      }
    }
    g.metric("max |fd - physical| / (1+|F|)", worst_fd);
    g.metric("max |fd - spectral| / (1+|F|)", worst_fd_spec);
    g.metric("max physical vs spectral relative", worst_rel);
    g.passed = worst_fd <= 1e-5 && worst_fd_spec <= 1e-5 && worst_rel <= 1e-9;
    g.detail = "fd vs physical " + fmt(worst_fd) + ", fd vs spectral " + fmt(worst_fd_spec) + " (<= 1e-5); physical vs spectral " +
               fmt(worst_rel) + " (<= 1e-9)";
  });
}

// ---------------------------------------------------------------------------
// 2. Flow structure

inline GateResult gate_flow_structure(const SuiteOptions& o) {
  return run_gate(2, "flow structure", [&](GateResult& g) {
    const SeedPlan plan{o.seed, 0xF10};
    double drift = 0.0;
    for (int N : {16, 32, 64}) {
      const GaussianSampler sampler(GaussianSpec{SobolevIndex(1.5), N});
      const Grid grid = Grid::for_extent(N);
      for (int i = 0; i < 5; ++i) {
        for (double t : {1.0, -1.0}) {
          FlowConfig c;
          c.N = N;
          c.t_end = t;
          drift = std::max(drift, evolve(sampler.draw(plan.substream(static_cast<std::uint64_t>(N)), static_cast<std::uint64_t>(i)), c, grid).max_drift);
        }
      }
    }

    // Energy drift at a fixed horizon against dt in the asymptotic range.
    const TorusField u0 = draw_field(GaussianSpec{SobolevIndex(1.5), 16}, plan.substream(1), 0);
    const Grid g16 = Grid::for_extent(16);
    std::vector<double> dts, drifts;
    for (double dt : {0.05, 0.025, 0.0125, 0.00625}) {
      FlowConfig c;
      c.N = 16;
      c.t_end = 1.0;
      c.dt = dt;
      c.check_energy = false;
      dts.push_back(dt);
      drifts.push_back(evolve(u0, c, g16).max_drift);
    }
    const double order = loglog_slope(dts, drifts);

    double logdet = 0.0;
    for (int N : {4, 8, 16}) {
      const TorusField u = draw_field(GaussianSpec{SobolevIndex(1.5), N}, plan.substream(2), static_cast<std::uint64_t>(N));
      for (double t : {0.5, 1.0}) logdet = std::max(logdet, std::abs(volume_probe(u, N, t, Grid::for_extent(N))));
    }

    // cos x = (e^{ix} + e^{-ix}) / 2 rotates: c(1, t) = c(1, 0) e^{-it/2}.
    FlowConfig c1;
    c1.N = 1;
    c1.t_end = 1.0;
    const FlowResult single = evolve(TorusField::mode(1, 1, 0.5), c1, Grid::for_extent(1));
    const double mode_err = std::abs(single.final_field[1] - std::polar(0.5, -0.5));

    g.metric("max relative energy drift, |t| = 1", drift);
    g.metric("RK4 order", order);
    g.metric("max |log det DPhi|", logdet);
    g.metric("single-mode error", mode_err);
    g.metric("single-mode drift", single.max_drift);
    g.passed = drift <= 1e-9 && std::abs(order - 4.0) <= 0.3 && logdet <= 1e-6 && mode_err <= 1e-10 && single.max_drift <= 1e-13;
    g.detail = "drift " + fmt(drift) + " (<= 1e-9), order " + fmt(order) + " (4 +- 0.3), |log det| " + fmt(logdet) +
               " (<= 1e-6), single mode " + fmt(mode_err) + " (<= 1e-10)";
  });
}

// ---------------------------------------------------------------------------
// 3. Wick oracle against Monte Carlo

struct WickMcCase {
  int N, M;
  double s;
};

inline GateResult gate_wick_mc(const SuiteOptions& o, const std::vector<WickMcCase>& cases, std::size_t n, int criterion = 3) {
  return run_gate(criterion, "Wick oracle vs Monte Carlo", [&](GateResult& g) {
    const std::array<SymbolTerm, 4> terms{SymbolTerm::F1, SymbolTerm::F2, SymbolTerm::F3, SymbolTerm::Total};
    double worst = 0.0;
    std::string where;
    for (const auto& c : cases) {
      const GaussianSampler sampler(GaussianSpec{SobolevIndex(c.s), c.N});
      std::vector<SymbolEvaluator> ev;
      for (SymbolTerm t : terms) ev.emplace_back(o.symbol(t, c.s), c.N);
      const SeedPlan plan{o.seed, 0x3C + static_cast<std::uint64_t>(c.N) * 7 + static_cast<std::uint64_t>(c.s * 100)};
      const auto draws = parallel_map<std::array<double, 4>>(n, [&](std::size_t i) {
        const TorusField u = sampler.draw(plan, i);
        std::array<double, 4> out{};
        for (std::size_t k = 0; k < 4; ++k) out[k] = f_spectral_detail(u, c.N, c.M, ev[k]).value;
        return out;
      });
      for (std::size_t k = 0; k < 4; ++k) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = draws[i][k];
        const McEstimate mc = mc_variance(v, o.seed);
        const TrilinearSymbol sym = o.symbol(terms[k], c.s);
        const double exact = wick_variance(sym, sym, c.s, c.N, c.M).total;
        const double z = std::abs(mc.mean - exact) / mc.std_error;
        const std::string key = "z " + to_string(terms[k]) + " (N=" + std::to_string(c.N) + ",M=" + std::to_string(c.M) + ",s=" + fmt(c.s) + ")";
        g.metric(key, z);
        if (z > worst) {
          worst = z;
          where = key;
        }
      }
    }
    g.passed = worst <= 5.0;
    g.detail = "worst " + where + " = " + fmt(worst) + " (<= 5), " + std::to_string(n) + " draws per case";
  });
}

// ---------------------------------------------------------------------------
// 4. Decay rates of the exact L^2 norms

inline GateResult gate_decay_rates(const SuiteOptions&, int n_max = 512) {
  return run_gate(4, "decay rates", [&](GateResult& g) {
    bool ok = true;
    double worst_margin = -std::numeric_limits<double>::infinity();
    for (double s : {0.8, 1.0, 1.5, 2.0, 3.0}) {
      const WickTailTable table(s, n_max);
      for (SymbolTerm t : {SymbolTerm::F1, SymbolTerm::F2, SymbolTerm::F3, SymbolTerm::Total}) {
        const DecayCurve c = decay_curve(table, TrilinearSymbol::make(t, s));
        const double bound = -predicted_rate(t, s) + 0.1;
        g.metric("slope " + to_string(t) + " s=" + fmt(s), c.slope);
        worst_margin = std::max(worst_margin, c.slope - bound);
        ok = ok && c.slope <= bound;
      }
    }
    g.passed = ok;
    g.detail = "max (slope - (-rate + 0.1)) = " + fmt(worst_margin) + " (<= 0), N_max = " + std::to_string(n_max);
  });
}

// ---------------------------------------------------------------------------
// 5. Convolution bounds

inline GateResult gate_convolution(const SuiteOptions&, int m_range = 4096) {
  return run_gate(5, "convolution bounds", [&](GateResult& g) {
    const std::vector<int> big_m{16, 32, 64, 128, 256, 512};
    bool ok = true;
    double worst = 0.0;
    for (double s : {0.8, 1.0, 2.0}) {
      for (ConvCase c : {ConvCase::I, ConvCase::II, ConvCase::III, ConvCase::IV}) {
        if (!conv_case_spec(c, s).applies) continue;
        const ConvSupReport r = conv_sup_study(c, s, m_range, big_m);
        g.metric("sup case " + to_string(c) + " s=" + fmt(s), r.sup_large);
        g.metric("change case " + to_string(c) + " s=" + fmt(s), r.change());
        worst = std::max(worst, r.change());
        ok = ok && std::isfinite(r.sup_large) && r.change() < 0.05;
      }
    }
    g.passed = ok;
    g.detail = "worst change on doubling the m range " + fmt(worst) + " (< 0.05)";
  });
}

// ---------------------------------------------------------------------------
// 6. Tails, moments and hypercontractivity

inline GateResult gate_tails(const SuiteOptions& o, std::size_t n = 1000000, std::size_t n_hyper = 200000) {
  return run_gate(6, "tails and moments", [&](GateResult& g) {
    constexpr int N = 64;
    constexpr double s = 1.5, kappa = 1.0;
    const SeedPlan plan{o.seed, 0x7A1};
    const double R = energy_quantile(s, 0.5, plan);
    const ObservableSet obs = collect_observables(N, s, R, n, plan);
    const TailCurve tf = tail_fn(obs), td = tail_dx_inf(obs, kappa), th = tail_hs(obs, kappa, false);
    const double gate_dx = 0.7 * predicted_dx_inf_exponent(s, kappa), gate_hs = 0.7 * predicted_hs_exponent(s, kappa);
    g.metric("R", R);
    g.metric("alpha |F_N|", tf.fit.alpha);
    g.metric("alpha |F_N| lower", tf.fit.alpha_lower());
    g.metric("alpha dx_inf", td.fit.alpha);
    g.metric("alpha dx_inf lower", td.fit.alpha_lower());
    g.metric("alpha H^s", th.fit.alpha);
    g.metric("alpha H^s lower", th.fit.alpha_lower());
    g.metric("H^s validity threshold", hs_validity_threshold(N, kappa));
    g.metric("H^s largest fitted t", th.fit.t_max);

    const std::vector<double> ps{2, 4, 6, 8, 10};
    const MomentTable mt = lp_growth(obs, ps);
    const double ratio = mt.ratio_upper();
    g.metric("L^p/p ratio (point)", mt.ratio());
    g.metric("L^p/p ratio (CI)", ratio);

    const HyperGrowth hg = hyper_growth(N, N / 2, s, ps, n_hyper, plan.substream(7));
    const double p_exp_upper = hg.moments.p_exponent_upper();
    const double z_l2 = std::abs(hg.moments.rows.front().norm - hg.exact_l2) / hg.moments.rows.front().std_error;
    g.metric("hyper p-exponent", hg.moments.p_exponent);
    g.metric("hyper p-exponent upper", p_exp_upper);
    g.metric("hyper z(L^2 vs Wick)", z_l2);

    const HyperDecay hd = hyper_decay({8, 16, 32, 64}, s, {2.0, 4.0}, n_hyper, plan.substream(8));
    const double slope_gate = -upsilon(s) + 0.1;
    double slope_upper = -std::numeric_limits<double>::infinity(), z_decay = 0.0;
    for (std::size_t k = 0; k < hd.p.size(); ++k) {
      g.metric("N-decay slope p=" + fmt(hd.p[k]), hd.slope[k]);
      g.metric("N-decay slope upper p=" + fmt(hd.p[k]), hd.slope_upper[k]);
      slope_upper = std::max(slope_upper, hd.slope_upper[k]);
    }
    const TrilinearSymbol total = TrilinearSymbol::make(SymbolTerm::Total, s);
    for (std::size_t j = 0; j < hd.N.size(); ++j) {
      const double exact = std::sqrt(wick_variance(total, total, s, 2 * hd.N[j], hd.N[j]).total);
      z_decay = std::max(z_decay, std::abs(hd.norm[0][j] - exact) / hd.std_error[0][j]);
    }
    g.metric("N-decay z(L^2 vs Wick)", z_decay);

    const bool tails_ok = tf.fit.alpha_lower() >= 0.8 && td.fit.alpha_lower() >= gate_dx && th.fit.alpha_lower() >= gate_hs;
    const bool moments_ok = ratio <= 3.0;
    const bool hyper_ok = p_exp_upper <= 1.7 && slope_upper <= slope_gate && z_l2 <= 5.0 && z_decay <= 5.0;
    g.passed = tails_ok && moments_ok && hyper_ok;
    g.detail = "alpha lower bounds |F| " + fmt(tf.fit.alpha_lower()) + " (>= 0.8), dx " + fmt(td.fit.alpha_lower()) + " (>= " +
               fmt(gate_dx) + "), H^s " + fmt(th.fit.alpha_lower()) + " (>= " + fmt(gate_hs) + "); L^p/p ratio " + fmt(ratio) +
               " (<= 3); p-exponent " + fmt(p_exp_upper) + " (<= 1.7); N-decay slope " + fmt(slope_upper) + " (<= " +
               fmt(slope_gate) + "); L^2 vs Wick z " + fmt(std::max(z_l2, z_decay)) + " (<= 5)";
  });
}

// ---------------------------------------------------------------------------
// 7. Change of variables

inline GateResult gate_change_of_variables(const SuiteOptions& o, std::size_t n = 100000) {
  return run_gate(7, "change of variables", [&](GateResult& g) {
    constexpr double s = 1.5;
    const SeedPlan plan{o.seed, 0xC07};
    const double R = energy_quantile(s, 0.5, plan);
    const double r = h12_quantile(s, 0.2, plan);
    const std::array<SetSpec, 2> sets{SetSpec::h12_ball(r), SetSpec::mode_box(1, 0.5, std::numeric_limits<double>::infinity())};
    double worst = 0.0, worst_k = 0.0;
    std::string where;
    std::uint64_t tag = 0;
    for (const SetSpec& A : sets) {
      for (int N : {8, 16}) {
        for (double t : {0.25, 0.5}) {
          const CovIdentity c = cov_identity(N, s, R, t, A, n, plan.substream(++tag));
          const std::string key = A.describe() + " N=" + std::to_string(N) + " t=" + fmt(t);
          g.metric("lhs " + key, c.lhs.mean);
          g.metric("rhs " + key, c.rhs.mean);
          g.metric("z " + key, c.z);
          g.metric("weight ESS fraction " + key, c.weights.ess_fraction);
          g.metric("weight tail k " + key, c.weights.pareto_k);
          if (c.z > worst) worst = c.z, where = key, worst_k = c.weights.pareto_k;
        }
      }
    }
    g.passed = worst <= 3.0;
    g.detail = "worst z " + fmt(worst) + " (<= 3) at " + where + " (rhs weight tail k " + fmt(worst_k) + "), " + std::to_string(n) +
               " draws per side";
  });
}

// ---------------------------------------------------------------------------
// 8. Transport growth

inline GateResult gate_transport(const SuiteOptions& o, std::size_t n = 100000) {
  return run_gate(8, "transport growth", [&](GateResult& g) {
    constexpr double s = 1.5;
    const SeedPlan plan{o.seed, 0x7E8};
    const double R = energy_quantile(s, 0.5, plan);
    const double r = h12_quantile(s, 0.2, plan);
    const TransportGrowth tg = transport_growth(16, s, R, SetSpec::h12_ball(r), 1.0, 10, n, plan.substream(1));
    for (const auto& row : tg.rows) g.metric("mass t=" + fmt(row.t), row.mass.mean);
    g.metric("C upper", tg.c_upper);
    g.metric("C lower", tg.c_lower);
    const bool grows = tg.c_lower == 1.0;
    g.metric("mass nondecreasing", grows ? 1.0 : 0.0);
    g.passed = tg.envelopes_exist();
    g.detail = "C_upper " + fmt(tg.c_upper) + ", C_lower " + fmt(tg.c_lower) + ", m(0) " + fmt(tg.rows.front().mass.mean) + " -> m(1) " +
               fmt(tg.rows.back().mass.mean) + (grows ? "" : "; mass decreases, so only the two-sided envelope applies");
  });
}

// ---------------------------------------------------------------------------
// Quick oracle-equivalence gates

inline GateResult gate_wick_pairings(const SuiteOptions& o) {
  return run_gate(0, "Wick contraction sum vs Isserlis pairings", [&](GateResult& g) {
    double worst = 0.0;
    for (double s : {1.0, 1.5}) {
      for (SymbolTerm t : {SymbolTerm::F1, SymbolTerm::F2, SymbolTerm::F3, SymbolTerm::Total}) {
        const TrilinearSymbol sym = o.symbol(t, s);
        const double a = wick_variance(sym, sym, s, 5, 2).total, b = wick_variance_isserlis(sym, sym, s, 5, 2);
        worst = std::max(worst, std::abs(a - b) / std::abs(b));
      }
    }
    const TrilinearSymbol f1 = TrilinearSymbol::make(SymbolTerm::F1, 1.0);
    const double small = wick_variance(f1, f1, 1.0, 2, 1).total;
    g.metric("max relative difference", worst);
    g.metric("F1 N=2 M=1 s=1", small);
    g.passed = worst <= 1e-12 && std::abs(small - 2.0) <= 1e-14;
    g.detail = "relative difference " + fmt(worst) + " (<= 1e-12); F1 at N=2, M=1, s=1 = " + fmt(small) + " (exact 2)";
  });
}

inline GateResult gate_convolution_closed_forms(const SuiteOptions&) {
  return run_gate(0, "convolution closed forms", [&](GateResult& g) {
    constexpr double pi = 3.141592653589793;
    // sum_n 1/(1+n^2) = pi coth pi
    const double a = conv_lhs(1.0, 1.0, 0, 0).value, ea = pi / std::tanh(pi);
    // sum_n 1/(1+n^2)^2 = (pi coth pi + pi^2 / sinh^2 pi) / 2
    const double b = conv_lhs(2.0, 2.0, 0, 0).value, eb = 0.5 * (ea + pi * pi / (std::sinh(pi) * std::sinh(pi)));
    const double err = std::max(std::abs(a / ea - 1.0), std::abs(b / eb - 1.0));
    g.metric("max relative error", err);
    g.passed = err <= 1e-12;
    g.detail = "relative error " + fmt(err) + " (<= 1e-12)";
  });
}

inline GateResult gate_sampler_moment(const SuiteOptions& o, std::size_t n = 40000) {
  return run_gate(0, "sampler second moment", [&](GateResult& g) {
    constexpr double s = 1.0;
    const GaussianSampler sampler(GaussianSpec{SobolevIndex(s), 4});
    const SeedPlan plan{o.seed, 0x5A};
    double worst = 0.0;
    for (int mode : {1, 2, 3}) {
      const auto v = parallel_map<double>(n, [&](std::size_t i) { return std::norm(sampler.draw(plan, i)[mode]); });
      const McEstimate m = mc_mean(v, o.seed);
      const double z = std::abs(m.mean - std::pow(mode, -(2 * s + 1))) / m.std_error;
      g.metric("z mode " + std::to_string(mode), z);
      worst = std::max(worst, z);
    }
    g.passed = worst <= 5.0;
    g.detail = "E|c(n)|^2 = n^{-(2s+1)}: worst z " + fmt(worst) + " (<= 5)";
  });
}

inline GateResult gate_concentration(const SuiteOptions& o, std::size_t n = 1000000) {
  return run_gate(0, "Gaussian tail self-check", [&](GateResult& g) {
    const ConcentrationReport single = concentration_selfcheck(1, n, o.seed);
    const ConcentrationReport sum = concentration_selfcheck(64, n, o.seed + 1);
    const double z = std::abs(single.abs_single.alpha - single.abs_single_exact.alpha) / single.abs_single.alpha_stderr;
    g.metric("alpha |X| (MC)", single.abs_single.alpha);
    g.metric("alpha |X| (exact survival)", single.abs_single_exact.alpha);
    g.metric("alpha sum |X_i| lower, d=64", sum.abs_sum.alpha_lower());
    g.passed = z <= 3.0 && sum.abs_sum.alpha_lower() >= 1.8;
    g.detail = "|X|: MC vs exact-survival fit z " + fmt(z) + " (<= 3); sum |X_i| alpha lower " + fmt(sum.abs_sum.alpha_lower()) +
               " (>= 1.8)";
  });
}

/// Oracle-equivalence gates and the cheap exact criteria.
inline std::vector<GateResult> suite_fast(const SuiteOptions& o) {
  return {gate_decomposition(o, 10),
          gate_flow_structure(o),
          gate_wick_pairings(o),
          gate_wick_mc(o, {{8, 4, 1.5}}, o.samples(20000), 0),
          gate_decay_rates(o),
          gate_convolution_closed_forms(o),
          gate_sampler_moment(o),
          gate_concentration(o, o.samples(200000))};
}

/// The acceptance battery, one gate per criterion.
inline GateResult run_criterion(int k, const SuiteOptions& o) {
  switch (k) {
    case 1: return gate_decomposition(o);
    case 2: return gate_flow_structure(o);
    case 3: return gate_wick_mc(o, {{16, 8, 1.0}, {32, 16, 1.5}, {32, 16, 2.0}}, o.samples(100000));
    case 4: return gate_decay_rates(o);
    case 5: return gate_convolution(o);
    case 6: return gate_tails(o, o.samples(1000000), o.samples(200000));
    case 7: return gate_change_of_variables(o, o.samples(100000));
    case 8: return gate_transport(o, o.samples(100000));
  }
  throw Error(Errc::ConfigInvalid, "criteria are numbered 1 to 8");
}

inline std::vector<GateResult> suite_full(const SuiteOptions& o) {
  std::vector<GateResult> out;
  for (int k = 1; k <= 8; ++k) out.push_back(run_criterion(k, o));
  return out;
}

}  // namespace bbm
