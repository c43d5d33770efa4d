#pragma once

// Exact second moments of the trilinear forms under gamma_s.
//
// With c(n) = g_n / |n|^{s+1/2}, E[c(n) conj c(m)] = delta_{nm} / |n|^{2s+1}.
// On A_{N,M} no triple contains an antipodal pair, so only the six cross
// pairings survive and
//   E[F_A F_B] = sum_sigma sum_{n in A_{N,M}} w_A(n) w_B(n_sigma) / prod |n_j|^{2s+1}.

#include <array>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "bbmlab/error.hpp"
#include "bbmlab/parallel.hpp"
#include "bbmlab/summation.hpp"
#include "bbmlab/symbols.hpp"

namespace bbm {

/// sigma as the tuple (sigma(1), sigma(2), sigma(3)), zero based.
inline constexpr std::array<std::array<int, 3>, 6> kPermutations{{
    {0, 1, 2}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}, {1, 2, 0}, {2, 0, 1},
}};

inline std::string permutation_label(std::size_t k) {
  const auto& p = kPermutations[k];
  return "(" + std::to_string(p[0] + 1) + "," + std::to_string(p[1] + 1) + "," + std::to_string(p[2] + 1) + ")";
}

struct ContractionSum {
  std::array<double, 6> per_sigma{};
  double total = 0.0;
};

namespace detail {

inline std::vector<double> gauss_weights(double s, int N) {
  std::vector<double> g(static_cast<std::size_t>(N + 1), 0.0);
  for (int n = 1; n <= N; ++n) g[static_cast<std::size_t>(n)] = std::pow(static_cast<double>(n), -(2.0 * s + 1.0));
  return g;
}

/// Triples of A_{N,M} with fixed n1, visited in n2 order.
template <class F>
void for_each_in_row(int N, int M, int n1, F&& f) {
  const int lo = std::max(-N, -N - n1), hi = std::min(N, N - n1);
  for (int n2 = lo; n2 <= hi; ++n2) {
    const int n3 = -n1 - n2;
    if (n2 == 0 || n3 == 0) continue;
    if (std::max({std::abs(n1), std::abs(n2), std::abs(n3)}) <= M) continue;
    f(n2, n3);
  }
}

inline int row_index_to_n1(int N, std::size_t r) {
  const int k = static_cast<int>(r);
  return k < N ? k - N : k - N + 1;  // skips n1 = 0
}

}  // namespace detail

/// E_{gamma_s}[(F_{A,N} - F_{A,M}) (F_{B,N} - F_{B,M})], split by sigma.
/// Rows n1 are independent and reduced pairwise in index order.
inline ContractionSum wick_variance(const TrilinearSymbol& symA, const TrilinearSymbol& symB, double s, int N, int M) {
  require(N > M && M >= 0, Errc::InvalidArgument, "wick_variance needs N > M >= 0");
  require(s > 0.5, Errc::ConfigInvalid, "Wick moments need s > 1/2");
  TrilinearSymbol a = symA, b = symB;
  a.s = b.s = s;
  const SymbolEvaluator wa(a, N), wb(b, N);
  const auto g = detail::gauss_weights(s, N);
  using Row = std::array<double, 6>;
  const auto rows = parallel_map<Row>(static_cast<std::size_t>(2 * N), [&](std::size_t r) {
    const int n1 = detail::row_index_to_n1(N, r);
    Row acc{};
    detail::for_each_in_row(N, M, n1, [&](int n2, int n3) {
      const std::array<int, 3> n{n1, n2, n3};
      const double base = wa(n1, n2, n3) * g[std::abs(n1)] * g[std::abs(n2)] * g[std::abs(n3)];
      if (base == 0.0) return;
      for (std::size_t k = 0; k < 6; ++k) {
        const auto& p = kPermutations[k];
        acc[k] += base * wb(n[p[0]], n[p[1]], n[p[2]]);
      }
    });
    return acc;
  });
  ContractionSum out;
  for (std::size_t k = 0; k < 6; ++k) {
    out.per_sigma[k] = pairwise_sum<double>([&](std::ptrdiff_t r) { return rows[static_cast<std::size_t>(r)][k]; }, 0,
                                            static_cast<std::ptrdiff_t>(rows.size()));
    out.total += out.per_sigma[k];
  }
  return out;
}

/// Same moment by brute force: for every pair of triples n, m in A_{N,M},
/// E[c(n1) c(n2) c(n3) c(-m1) c(-m2) c(-m3)] summed over all 15 perfect
/// matchings with E[c(a) c(b)] = delta_{a,-b} |a|^{-(2s+1)}. O(|A|^2), small N only.
inline double wick_variance_isserlis(const TrilinearSymbol& symA, const TrilinearSymbol& symB, double s, int N, int M) {
  require(N > M && M >= 0, Errc::InvalidArgument, "need N > M >= 0");
  TrilinearSymbol a = symA, b = symB;
  a.s = b.s = s;
  const auto A = enumerate_A(N, M);
  auto cov = [&](int x, int y) { return x == -y ? std::pow(std::abs(x), -(2.0 * s + 1.0)) : 0.0; };
  double total = 0.0;
  for (const auto& n : A) {
    const double wa = a.weight(n.n1, n.n2, n.n3);
    for (const auto& m : A) {
      const std::array<int, 6> z{n.n1, n.n2, n.n3, -m.n1, -m.n2, -m.n3};
      // Recursive matching: pair the first free index with each later one.
      double moment = 0.0;
      std::array<bool, 6> used{};
      auto rec = [&](auto&& self, double acc) -> void {
        int i = 0;
        while (i < 6 && used[static_cast<std::size_t>(i)]) ++i;
        if (i == 6) {
          moment += acc;
          return;
        }
        used[static_cast<std::size_t>(i)] = true;
        for (int j = i + 1; j < 6; ++j) {
          if (used[static_cast<std::size_t>(j)]) continue;
          const double c = cov(z[static_cast<std::size_t>(i)], z[static_cast<std::size_t>(j)]);
          if (c == 0.0) continue;
          used[static_cast<std::size_t>(j)] = true;
          self(self, acc * c);
          used[static_cast<std::size_t>(j)] = false;
        }
        used[static_cast<std::size_t>(i)] = false;
      };
      rec(rec, 1.0);
      total += wa * b.weight(m.n1, m.n2, m.n3) * moment;
    }
  }
  return total;
}

/// Contributions to E[F_i F_j] (unit-coefficient w_i) bucketed by the largest
/// frequency max|n_j| = k. Any symbol's ||F_N - F_M||^2 for N <= N_max is
/// then a partial sum over k in (M, N].
class WickTailTable {
 public:
  WickTailTable(double s, int n_max) : s_(s), n_max_(n_max), bucket_(static_cast<std::size_t>(n_max + 1)) {
    require(n_max >= 1, Errc::InvalidArgument, "N_max must be >= 1");
    require(s > 0.5, Errc::ConfigInvalid, "Wick moments need s > 1/2");
    const auto g = detail::gauss_weights(s, n_max);
    std::array<SymbolEvaluator, 3> w{
        SymbolEvaluator(TrilinearSymbol{SymbolTerm::F1, s, {1, 1, 1}}, n_max),
        SymbolEvaluator(TrilinearSymbol{SymbolTerm::F2, s, {1, 1, 1}}, n_max),
        SymbolEvaluator(TrilinearSymbol{SymbolTerm::F3, s, {1, 1, 1}}, n_max),
    };
    // Per-row buckets would need O(N^2) memory; instead each row scatters into
    // a private bucket array that is folded in row order.
    const auto rows = parallel_map<std::vector<Cell>>(static_cast<std::size_t>(2 * n_max), [&](std::size_t r) {
      const int n1 = detail::row_index_to_n1(n_max, r);
      std::vector<Cell> local(static_cast<std::size_t>(n_max + 1));
      detail::for_each_in_row(n_max, 0, n1, [&](int n2, int n3) {
        const std::array<int, 3> n{n1, n2, n3};
        const int top = std::max({std::abs(n1), std::abs(n2), std::abs(n3)});
        const double gw = g[std::abs(n1)] * g[std::abs(n2)] * g[std::abs(n3)];
        std::array<double, 3> base{};
        for (int i = 0; i < 3; ++i) base[i] = w[i](n1, n2, n3) * gw;
        auto& cell = local[static_cast<std::size_t>(top)];
        for (const auto& p : kPermutations) {
          for (int j = 0; j < 3; ++j) {
            const double wj = w[j](n[p[0]], n[p[1]], n[p[2]]);
            for (int i = 0; i < 3; ++i) cell[i * 3 + j] += base[i] * wj;
          }
        }
      });
      return local;
    });
    for (std::size_t k = 0; k < bucket_.size(); ++k)
      for (int e = 0; e < 9; ++e)
        bucket_[k][e] = pairwise_sum<double>([&](std::ptrdiff_t r) { return rows[static_cast<std::size_t>(r)][k][e]; }, 0,
                                             static_cast<std::ptrdiff_t>(rows.size()));
  }

  double s() const { return s_; }
  int n_max() const { return n_max_; }

  /// ||F_N - F_M||^2_{L^2(gamma_s)} for the symbol's signed term mix.
  double variance(const TrilinearSymbol& sym, int N, int M) const {
    require(N > M && M >= 0 && N <= n_max_, Errc::InvalidArgument, "need N_max >= N > M >= 0");
    const auto a = mix(sym);
    double acc = 0.0;
    for (int k = N; k > M; --k) {  // small buckets last
      const auto& c = bucket_[static_cast<std::size_t>(k)];
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) acc += a[i] * a[j] * c[i * 3 + j];
    }
    return acc;
  }

  /// 3x3 covariance of the signed terms F1, F2, F3 over A_{N,M}.
  std::array<double, 9> covariance(int N, int M) const {
    std::array<double, 9> out{};
    const std::array<double, 3> coeff{1.0, -2.0, 1.0};
    for (int k = N; k > M; --k)
      for (int e = 0; e < 9; ++e) out[e] += coeff[e / 3] * coeff[e % 3] * bucket_[static_cast<std::size_t>(k)][e];
    return out;
  }

 private:
  using Cell = std::array<double, 9>;

  static std::array<double, 3> mix(const TrilinearSymbol& sym) {
    switch (sym.term) {
      case SymbolTerm::F1: return {sym.coeff[0], 0.0, 0.0};
      case SymbolTerm::F2: return {0.0, sym.coeff[1], 0.0};
      case SymbolTerm::F3: return {0.0, 0.0, sym.coeff[2]};
      case SymbolTerm::Total: return sym.coeff;
      case SymbolTerm::Unit: break;
    }
    throw Error(Errc::InvalidArgument, "tail table covers F1, F2, F3 and TOTAL only");
  }

  double s_;
  int n_max_;
  std::vector<Cell> bucket_;
};

struct DecayPoint {
  int M = 0;
  double l2 = 0.0;  // ||F_{N_max} - F_M||_{L^2(gamma_s)}
};

struct DecayCurve {
  SymbolTerm term = SymbolTerm::Total;
  double s = 0.0;
  int n_max = 0;
  std::vector<DecayPoint> points;  // M = 1, 2, 4, ..., N_max / 2
  double slope = 0.0;              // fit over M <= N_max / 4
  double saturation_slope = 0.0;   // fit over N_max / 8 <= M <= N_max / 2
  bool monotone = true;
};

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, Errc::InvalidArgument, "slope fit needs two or more points");
  double mx = 0, my = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(x[i] > 0 && y[i] > 0, Errc::InvalidArgument, "log-log fit needs positive data");
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

/// Slope after moving each y by k standard errors towards the steepest
/// (rising = true) or the flattest (rising = false) line: the first half of
/// the points down and the second half up, or the reverse.
inline double loglog_slope_shifted(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& se,
                                   double k, bool rising) {
  std::vector<double> z(y);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const bool late = 2 * i + 1 > y.size();
    const double sign = (late == rising) ? 1.0 : -1.0;
    z[i] = std::max(y[i] + sign * k * se[i], 1e-300);
  }
  return loglog_slope(x, z);
}

inline DecayCurve decay_curve(const WickTailTable& table, const TrilinearSymbol& sym) {
  const int n_max = table.n_max();
  require(n_max >= 8, Errc::InvalidArgument, "decay curve needs N_max >= 8");
  DecayCurve out{sym.term, table.s(), n_max, {}, 0.0, 0.0, true};
  for (int M = 1; 2 * M <= n_max; M *= 2) out.points.push_back({M, std::sqrt(std::max(0.0, table.variance(sym, n_max, M)))});
  std::vector<double> x, y, xs, ys;
  for (const auto& p : out.points) {
    if (4 * p.M <= n_max) x.push_back(p.M), y.push_back(p.l2);
    if (8 * p.M >= n_max) xs.push_back(p.M), ys.push_back(p.l2);
  }
  for (std::size_t i = 1; i < out.points.size(); ++i) out.monotone &= out.points[i].l2 <= out.points[i - 1].l2;
  out.slope = loglog_slope(x, y);
  out.saturation_slope = loglog_slope(xs, ys);
  return out;
}

inline DecayCurve decay_curve(SymbolTerm term, double s, int n_max) {
  return decay_curve(WickTailTable(s, n_max), TrilinearSymbol::make(term, s));
}

/// Decay exponent claimed for ||F_{i,N} - F_{i,M}||_{L^2}: M^{-rate}.
inline double predicted_rate(SymbolTerm term, double s) {
  switch (term) {
    case SymbolTerm::F1:
    case SymbolTerm::F2: return s <= 1.5 ? s / 2.0 - 0.25 : 0.5;
    case SymbolTerm::F3: return 0.5;
    case SymbolTerm::Total: return std::min(0.5, (2.0 * s - 1.0) / 4.0);
    case SymbolTerm::Unit: break;
  }
  throw Error(Errc::InvalidArgument, "no predicted rate for the unit symbol");
}

/// Measured constants of | |a+b|^s - |a|^s | against |b|^s (|a| <= 2|b|)
/// and against |a|^{s-1}|b| (|a| > 2|b|), with their exact suprema.
struct PowerDifferenceCheck {
  double s = 0.0;
  double easy_measured = 0.0, easy_sup = 0.0;
  double hard_measured = 0.0, hard_sup = 0.0;
  std::size_t pairs = 0;
};

inline PowerDifferenceCheck power_difference_check(double s, std::size_t n_pairs, std::uint64_t seed, int range = 1 << 20) {
  require(s > 0.0, Errc::InvalidArgument, "power-difference check needs s > 0");
  PowerDifferenceCheck out{s};
  out.pairs = n_pairs;
  std::mt19937_64 eng(seed);
  std::uniform_int_distribution<int> mag(1, range);
  std::uniform_int_distribution<int> sign(0, 1);
  auto p = [&](double v) { return std::pow(std::abs(v), s); };
  for (std::size_t i = 0; i < n_pairs; ++i) {
    // Half of the pairs with |a| comparable to |b| to probe the boundary.
    const double b = (sign(eng) ? 1 : -1) * static_cast<double>(mag(eng));
    double a = (sign(eng) ? 1 : -1) * static_cast<double>(i % 2 ? mag(eng) : std::uniform_int_distribution<int>(0, 3 * static_cast<int>(std::abs(b)))(eng));
    const double diff = std::abs(p(a + b) - p(a));
    if (std::abs(a) <= 2.0 * std::abs(b)) {
      out.easy_measured = std::max(out.easy_measured, diff / p(b));
    } else {
      out.hard_measured = std::max(out.hard_measured, diff / (std::pow(std::abs(a), s - 1.0) * std::abs(b)));
    }
  }
  // Easy region: x = a/b in [-2, 2], sup |(1+x)^s - |x|^s| is at an endpoint
  // or at x = -1/2 where both terms equal (1/2)^s.
  for (double x : {-2.0, -1.0, -0.5, 0.0, 1.0, 2.0}) out.easy_sup = std::max(out.easy_sup, std::abs(p(1 + x) - p(x)));
  // Hard region: x = |b|/|a| in (0, 1/2). Both |(1 +- x)^s - 1| / x are
  // monotone in x, so the sup is the x -> 0 limit s or the x -> 1/2 value.
  out.hard_sup = std::max({s, 2.0 * std::abs(std::pow(1.5, s) - 1.0), 2.0 * std::abs(1.0 - std::pow(0.5, s))});
  return out;
}

}  // namespace bbm
