#pragma once

// Monte Carlo summaries: means with standard errors, sample variances with
// their own standard errors, empirical survival curves and the tail-exponent
// fit S(t) ~ C exp(-c t^alpha).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "bbmlab/error.hpp"
#include "bbmlab/summation.hpp"

namespace bbm {

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

inline McEstimate mc_mean(std::span<const double> v, std::uint64_t seed = 0) {
  require(!v.empty(), Errc::InvalidArgument, "empty sample");
  const double n = static_cast<double>(v.size());
  const double mean = pairwise_sum<double>(v) / n;
  const double ss = pairwise_sum<double>([&](std::ptrdiff_t i) {
    const double d = v[static_cast<std::size_t>(i)] - mean;
    return d * d;
  }, 0, static_cast<std::ptrdiff_t>(v.size()));
  const double var = v.size() > 1 ? ss / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n), v.size(), seed};
}

/// Sample variance (about the sample mean) and its standard error
/// sqrt((m4 - var^2) / n).
inline McEstimate mc_variance(std::span<const double> v, std::uint64_t seed = 0) {
  require(v.size() >= 2, Errc::InvalidArgument, "variance needs two or more samples");
  const double n = static_cast<double>(v.size());
  const double mean = pairwise_sum<double>(v) / n;
  auto moment = [&](int k) {
    return pairwise_sum<double>([&](std::ptrdiff_t i) { return std::pow(v[static_cast<std::size_t>(i)] - mean, k); }, 0,
                                static_cast<std::ptrdiff_t>(v.size())) / n;
  };
  const double m2 = moment(2), m4 = moment(4);
  return {m2 * n / (n - 1.0), std::sqrt(std::max(0.0, m4 - m2 * m2) / n), v.size(), seed};
}

/// |a - b| / sqrt(se_a^2 + se_b^2); exact agreement with zero error gives 0.
inline double z_score(const McEstimate& a, const McEstimate& b) {
  const double se = std::hypot(a.std_error, b.std_error);
  const double d = std::abs(a.mean - b.mean);
  if (se == 0.0) return d == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return d / se;
}

struct WeightDiagnostics {
  double ess = 0.0;       // (sum w)^2 / sum w^2 over all draws
  double ess_fraction = 0.0;
  double pareto_k = 0.0;  // Hill estimate of the weight tail shape; > 0.5 means no usable variance
  std::size_t tail_size = 0;
};

/// Effective sample size and tail shape of nonnegative importance weights.
/// The Hill estimator uses the k = min(n/5, 3 sqrt n) largest positive weights.
inline WeightDiagnostics weight_diagnostics(std::span<const double> w) {
  WeightDiagnostics d;
  std::vector<double> pos;
  double sum = 0.0, sq = 0.0;
  for (double x : w) {
    sum += x;
    sq += x * x;
    if (x > 0.0) pos.push_back(x);
  }
  d.ess = sq > 0.0 ? sum * sum / sq : 0.0;
  d.ess_fraction = w.empty() ? 0.0 : d.ess / static_cast<double>(w.size());
  const auto np = static_cast<double>(pos.size());
  const auto k = static_cast<std::size_t>(std::min(np / 5.0, 3.0 * std::sqrt(np)));
  if (k >= 5) {
    std::partial_sort(pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(k + 1), pos.end(), std::greater<>());
    double h = 0.0;
    for (std::size_t i = 0; i < k; ++i) h += std::log(pos[i] / pos[k]);
    d.pareto_k = h / static_cast<double>(k);
    d.tail_size = k;
  }
  return d;
}

/// Wilson score interval for a binomial proportion k / n.
inline std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z = 1.96) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n), p = static_cast<double>(k) / nn, z2 = z * z;
  const double centre = (p + z2 / (2 * nn)) / (1 + z2 / nn);
  const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / (1 + z2 / nn);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

struct TailPoint {
  double t = 0.0;
  double survival = 0.0;  // unnormalized: #{accepted, X >= t} / n
  double ci_lo = 0.0, ci_hi = 0.0;
  std::size_t exceedances = 0;
};

struct TailFit {
  double C = 0.0, c = 0.0, alpha = 0.0;
  double alpha_stderr = 0.0;  // Poisson bootstrap over the curve increments
  double alpha_loglog = 0.0;  // plain slope of log(-log S) against log t
  std::size_t bins = 0;
  double t_min = 0.0, t_max = 0.0;
  /// alpha lowered by two standard errors, for one-sided gates.
  double alpha_lower() const { return alpha - 2.0 * alpha_stderr; }
  double alpha_upper() const { return alpha + 2.0 * alpha_stderr; }
};

struct TailCurve {
  std::string quantity;
  std::vector<TailPoint> points;
  TailFit fit;
  std::size_t n = 0;       // all draws, accepted or not
  double mass = 0.0;       // survival at t = 0: accepted fraction
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kMinExceedances = 50;

namespace detail {

// Weighted least squares of log S_i = log C - c t_i^alpha for fixed alpha.
struct LinearTailFit {
  double logC = 0.0, c = 0.0, sse = 0.0;
};

inline LinearTailFit fit_fixed_alpha(const std::vector<double>& t, const std::vector<double>& logS,
                                     const std::vector<double>& w, double alpha) {
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double x = std::pow(t[i], alpha);
    sw += w[i], sx += w[i] * x, sy += w[i] * logS[i], sxx += w[i] * x * x, sxy += w[i] * x * logS[i];
  }
  const double det = sw * sxx - sx * sx;
  LinearTailFit f;
  const double slope = (sw * sxy - sx * sy) / det;
  f.logC = (sy - slope * sx) / sw;
  f.c = -slope;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = logS[i] - (f.logC - f.c * std::pow(t[i], alpha));
    f.sse += w[i] * r * r;
  }
  return f;
}

inline double best_alpha(const std::vector<double>& t, const std::vector<double>& logS, const std::vector<double>& w) {
  // Profile over log alpha; the objective is smooth and unimodal in practice.
  auto obj = [&](double la) { return fit_fixed_alpha(t, logS, w, std::exp(la)).sse; };
  const auto r = boost::math::tools::brent_find_minima(obj, std::log(0.05), std::log(8.0), 40);
  return std::exp(r.first);
}

}  // namespace detail

/// Fit S(t) = C exp(-c t^alpha) to the points with at least kMinExceedances
/// exceedances and t >= t_floor. Weights 1/var(log S) = k (binomial, small p).
inline TailFit fit_tail(const std::vector<TailPoint>& pts, std::size_t n, double t_floor, std::uint64_t seed) {
  std::vector<double> t, logS, w;
  std::vector<std::size_t> k;
  for (const auto& p : pts) {
    if (p.exceedances < kMinExceedances || p.t < t_floor || !(p.t > 0.0)) continue;
    t.push_back(p.t);
    logS.push_back(std::log(p.survival));
    w.push_back(static_cast<double>(p.exceedances));
    k.push_back(p.exceedances);
  }
  if (t.size() < 3) throw Error(Errc::InsufficientTail, "fewer than 3 tail bins with >= 50 exceedances");
  TailFit fit;
  fit.bins = t.size();
  fit.t_min = t.front();
  fit.t_max = t.back();
  fit.alpha = detail::best_alpha(t, logS, w);
  const auto lin = detail::fit_fixed_alpha(t, logS, w, fit.alpha);
  fit.C = std::exp(lin.logC);
  fit.c = lin.c;
  {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double q = -logS[i];
      if (q > 0.0) lx.push_back(std::log(t[i])), ly.push_back(std::log(q));
    }
    if (lx.size() >= 2) {
      double mx = 0, my = 0;
      for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
      mx /= static_cast<double>(lx.size()), my /= static_cast<double>(lx.size());
      double sxy = 0, sxx = 0;
      for (std::size_t i = 0; i < lx.size(); ++i) sxy += (lx[i] - mx) * (ly[i] - my), sxx += (lx[i] - mx) * (lx[i] - mx);
      fit.alpha_loglog = sxy / sxx;
    }
  }
  // Counts between successive thresholds are independent Poisson to good
  // approximation; resample them and refit.
  std::mt19937_64 eng(seed ^ 0x7A11F17ULL);
  std::vector<std::size_t> inc(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) inc[i] = k[i] - (i + 1 < k.size() ? k[i + 1] : 0);
  constexpr int kBoot = 100;
  double sa = 0, saa = 0;
  std::vector<double> bl(k.size()), bw(k.size());
  for (int b = 0; b < kBoot; ++b) {
    std::size_t acc = 0;
    for (std::size_t i = k.size(); i-- > 0;) {
      acc += std::poisson_distribution<std::size_t>(static_cast<double>(inc[i]))(eng);
      const double kk = static_cast<double>(std::max<std::size_t>(acc, 1));
      bl[i] = std::log(kk / static_cast<double>(n));
      bw[i] = kk;
    }
    const double a = detail::best_alpha(t, bl, bw);
    sa += a, saa += a * a;
  }
  const double ma = sa / kBoot;
  fit.alpha_stderr = std::sqrt(std::max(0.0, saa / kBoot - ma * ma));
  return fit;
}

/// Grid start, as a quantile of the accepted values. The tail fit is an
/// asymptotic statement; below the upper decile even a plain Gaussian fits
/// alpha ~ 1.6.
inline constexpr double kTailStartQuantile = 0.9;

/// Empirical survival of values[i] over the draws with accepted[i], on a
/// log-spaced grid from the accepted start quantile to the level with
/// kMinExceedances exceedances, normalized by the total draw count n.
inline TailCurve survival_curve(std::string quantity, std::span<const double> values, const std::vector<char>& accepted,
                                int grid_points, std::uint64_t seed, double t_floor = -1.0,
                                double start_quantile = kTailStartQuantile) {
  require(values.size() == accepted.size(), Errc::InvalidArgument, "value and indicator lengths differ");
  TailCurve out;
  out.quantity = std::move(quantity);
  out.n = values.size();
  out.seed = seed;
  std::vector<double> acc;
  acc.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    if (accepted[i]) acc.push_back(values[i]);
  out.mass = static_cast<double>(acc.size()) / static_cast<double>(out.n);
  if (acc.size() < 2 * kMinExceedances) throw Error(Errc::InsufficientTail, "too few accepted draws for a tail curve");
  std::sort(acc.begin(), acc.end());
  const auto first = static_cast<std::size_t>(start_quantile * static_cast<double>(acc.size() - 1));
  const double lo = std::max(acc[first], std::numeric_limits<double>::min());
  const double hi = acc[acc.size() - kMinExceedances];
  const double ratio = hi > lo ? std::pow(hi / lo, 1.0 / (grid_points - 1)) : 1.0;
  for (int j = 0; j < grid_points; ++j) {
    const double t = lo * std::pow(ratio, j);
    const auto k = static_cast<std::size_t>(acc.end() - std::lower_bound(acc.begin(), acc.end(), t));
    TailPoint p{t, static_cast<double>(k) / static_cast<double>(out.n), 0, 0, k};
    std::tie(p.ci_lo, p.ci_hi) = wilson_interval(k, out.n);
    out.points.push_back(p);
  }
  out.fit = fit_tail(out.points, out.n, t_floor, seed);
  return out;
}

/// Unnormalized moment (E[|X|^p 1_acc])^{1/p} with a bootstrap coefficient of
/// variation of E[|X|^p 1_acc].
struct MomentEstimate {
  double p = 0.0;
  double norm = 0.0;
  double std_error = 0.0;  // of norm, by the delta method
  double cv = 0.0;       // bootstrap CV of the raw moment
};

inline MomentEstimate lp_moment(std::span<const double> values, const std::vector<char>* accepted, double p,
                                std::uint64_t seed, int n_boot = 100) {
  const std::size_t n = values.size();
  require(n >= 2, Errc::InvalidArgument, "moment needs samples");
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = (!accepted || (*accepted)[i]) ? std::pow(std::abs(values[i]), p) : 0.0;
  const McEstimate m = mc_mean(y, seed);
  MomentEstimate out{p};
  out.norm = std::pow(m.mean, 1.0 / p);
  out.std_error = m.mean > 0 ? out.norm * m.std_error / (p * m.mean) : 0.0;
  std::mt19937_64 eng(seed ^ 0xB0075ULL);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  double s1 = 0, s2 = 0;
  for (int b = 0; b < n_boot; ++b) {
    double acc = 0;
    for (std::size_t i = 0; i < n; ++i) acc += y[pick(eng)];
    acc /= static_cast<double>(n);
    s1 += acc, s2 += acc * acc;
  }
  const double mb = s1 / n_boot;
  out.cv = mb > 0 ? std::sqrt(std::max(0.0, s2 / n_boot - mb * mb)) / mb : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace bbm
