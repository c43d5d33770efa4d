#pragma once

// Weighted lattice convolutions sum_{|n| >= M} <n>^{-x} <m-n>^{-y}, <n> = (1+n^2)^{1/2},
// and the envelopes they are compared against.
//
// The window |n| <= T is summed directly; each one-sided tail n > T is
// replaced by Euler-Maclaurin to first order,
//   sum_{n>T} f(n) = int_T^inf f - f(T)/2 - f'(T)/12 + R,
//   |R| <= 2 zeta(3)/(2 pi)^3 int_T^inf |f'''| = 0.00969 |f''(T)|,
// the last step valid because f''' keeps one sign for n > T >= 4|m| + 4.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "bbmlab/error.hpp"
#include "bbmlab/parallel.hpp"
#include "bbmlab/summation.hpp"

namespace bbm {

inline double japanese(double n) { return std::sqrt(1.0 + n * n); }

struct ConvValue {
  double value = 0.0;
  double remainder_bound = 0.0;  // bound on the tail replacement and cancellation error
};

namespace detail {

// g(n) = (1+n^2)^{-a/2} and its first two derivatives.
struct PowerBracket {
  double a;
  double f(double n) const { return std::pow(1.0 + n * n, -a / 2); }
  double d1(double n) const { return -a * n * std::pow(1.0 + n * n, -a / 2 - 1); }
  double d2(double n) const {
    const double q = 1.0 + n * n;
    return -a * std::pow(q, -a / 2 - 1) + a * (a + 2) * n * n * std::pow(q, -a / 2 - 2);
  }
};

// One-sided tail sum_{n > T} <n>^{-x} <n - c>^{-y}.
inline ConvValue one_sided_tail(double x, double y, double c, double T) {
  const PowerBracket gx{x}, gy{y};
  auto f = [&](double n) { return gx.f(n) * gy.f(n - c); };
  const double f1 = gx.d1(T) * gy.f(T - c) + gx.f(T) * gy.d1(T - c);
  const double f2 = gx.d2(T) * gy.f(T - c) + 2 * gx.d1(T) * gy.d1(T - c) + gx.f(T) * gy.d2(T - c);
  boost::math::quadrature::exp_sinh<double> integrator;
  double err = 0.0;
  const double integral = integrator.integrate([&](double t) { return f(T + t); }, 0.0,
                                               std::numeric_limits<double>::infinity(), 1e-14, &err);
  constexpr double kEm = 2.0 * 1.2020569031595942 / (8.0 * 3.141592653589793 * 3.141592653589793 * 3.141592653589793);
  return {integral - f(T) / 2 - f1 / 12, kEm * std::abs(f2) + err};
}

}  // namespace detail

/// Direct window of the convolution for every m in [0, m_max] at once.
class ConvolutionTable {
 public:
  ConvolutionTable(double x, double y, int m_max) : x_(x), y_(y), m_max_(m_max) {
    if (!(x + y > 1.0)) throw Error(Errc::DivergentSum, "convolution needs x + y > 1");
    require(x > 0 && y > 0, Errc::InvalidArgument, "exponents must be positive");
    require(m_max >= 0, Errc::InvalidArgument, "m range must be nonnegative");
    T_ = std::max(1 << 15, 8 * m_max + 8);
    const int L = T_ + m_max_;
    ax_.resize(static_cast<std::size_t>(2 * L + 1));
    by_.resize(static_cast<std::size_t>(2 * L + 1));
    for (int k = -L; k <= L; ++k) {
      ax_[static_cast<std::size_t>(k + L)] = std::pow(1.0 + double(k) * k, -x / 2);
      by_[static_cast<std::size_t>(k + L)] = std::pow(1.0 + double(k) * k, -y / 2);
    }
    L_ = L;
    full_ = parallel_map<ConvValue>(static_cast<std::size_t>(m_max + 1), [&](std::size_t i) { return full(static_cast<int>(i)); });
  }

  double x() const { return x_; }
  double y() const { return y_; }
  int m_max() const { return m_max_; }
  int window() const { return T_; }

  /// sum_{|n| >= M} <n>^{-x} <m-n>^{-y}; symmetric in m.
  ConvValue lhs(int M, int m) const {
    require(M >= 0, Errc::InvalidArgument, "M must be nonnegative");
    require(M <= T_, Errc::InvalidArgument, "M beyond the direct window");
    const int am = std::abs(m);
    require(am <= m_max_, Errc::InvalidArgument, "m outside the tabulated range");
    ConvValue v = full_[static_cast<std::size_t>(am)];
    double inner = 0.0;
    for (int n = -(M - 1); n <= M - 1; ++n) inner += a(n) * b(am - n);
    // Subtracting the window cancels when most of the mass sits inside it.
    v.remainder_bound += 64.0 * std::numeric_limits<double>::epsilon() * (v.value + inner);
    v.value -= inner;
    return v;
  }

 private:
  double a(int n) const { return ax_[static_cast<std::size_t>(n + L_)]; }
  double b(int n) const { return by_[static_cast<std::size_t>(n + L_)]; }

  ConvValue full(int m) const {
    const double direct = pairwise_sum<double>([&](std::ptrdiff_t i) {
      const int n = static_cast<int>(i) - T_;
      return a(n) * b(m - n);
    }, 0, 2 * static_cast<std::ptrdiff_t>(T_) + 1);
    // n > T: <n>^{-x}<n-m>^{-y}; n < -T, n = -k: <k>^{-x}<k+m>^{-y}.
    const ConvValue hi = detail::one_sided_tail(x_, y_, m, T_);
    const ConvValue lo = detail::one_sided_tail(x_, y_, -m, T_);
    return {direct + hi.value + lo.value, hi.remainder_bound + lo.remainder_bound};
  }

  double x_, y_;
  int m_max_;
  int T_ = 0, L_ = 0;
  std::vector<double> ax_, by_;
  std::vector<ConvValue> full_;
};

inline ConvValue conv_lhs(double x, double y, int M, int m) {
  return ConvolutionTable(x, y, std::abs(m)).lhs(M, m);
}

/// The four particular cases of the convolution bound, indexed by s.
enum class ConvCase { I = 1, II = 2, III = 3, IV = 4 };

inline ConvCase parse_conv_case(const std::string& c) {
  if (c == "i" || c == "1" || c == "I") return ConvCase::I;
  if (c == "ii" || c == "2" || c == "II") return ConvCase::II;
  if (c == "iii" || c == "3" || c == "III") return ConvCase::III;
  if (c == "iv" || c == "4" || c == "IV") return ConvCase::IV;
  throw Error(Errc::ConfigInvalid, "unknown convolution case '" + c + "' (expected i, ii, iii or iv)");
}

inline std::string to_string(ConvCase c) {
  switch (c) {
    case ConvCase::I: return "i";
    case ConvCase::II: return "ii";
    case ConvCase::III: return "iii";
    case ConvCase::IV: return "iv";
  }
  return "?";
}

struct ConvCaseSpec {
  double x, y;      // summand exponents
  double r;         // decay of the envelope in <m>
  double r_M;       // decay of the M term
  bool applies;     // whether s lies in the case's range
};

inline ConvCaseSpec conv_case_spec(ConvCase c, double s) {
  switch (c) {
    case ConvCase::I: return {2 * s - 1, 1.0, s - 0.5, s - 0.5, s > 0.5 && s < 1.5};
    case ConvCase::II: return {2 * s - 1, 1.0, 1.0, 1.0, s >= 1.5};
    case ConvCase::III: return {s, s, s - 0.5, s - 0.5, s > 0.5};
    case ConvCase::IV: return {2 * s + 1, 1.0, 1.0, 2 * s, s > 0.5};
  }
  throw Error(Errc::InvalidArgument, "bad convolution case");
}

/// Envelope <m>^{-r} (1_{|m| >= 2M/3} + <M>^{-r_M}) with unit constant.
inline double conv_envelope(const ConvCaseSpec& c, int M, int m) {
  const double ind = 3.0 * std::abs(m) >= 2.0 * M ? 1.0 : 0.0;
  return std::pow(japanese(m), -c.r) * (ind + std::pow(japanese(M), -c.r_M));
}

/// General two-term bound with Holder exponents (p, q):
/// <m>^{-(x - 1/p)} 1_{|m| >= 2M/3} + <M>^{-(x - 1/q)} <m>^{-(1/q - (1 - y))}.
inline double conv_envelope_general(double x, double y, double inv_p, double inv_q, int M, int m) {
  const double ind = 3.0 * std::abs(m) >= 2.0 * M ? 1.0 : 0.0;
  return ind * std::pow(japanese(m), -(x - inv_p)) +
         std::pow(japanese(M), -(x - inv_q)) * std::pow(japanese(m), -(inv_q - (1.0 - y)));
}

struct ConvSupRow {
  int M = 0;
  double sup = 0.0;  // over |m| <= 2 m_range
  int argmax_m = 0;
};

struct ConvSupReport {
  ConvCase which = ConvCase::I;
  double s = 0.0;
  double sup_small = 0.0;  // sup over |m| <= m_range
  double sup_large = 0.0;  // sup over |m| <= 2 m_range
  int argmax_m = 0, argmax_M = 0;
  double worst_relative_remainder = 0.0;
  std::vector<ConvSupRow> per_M;
  double change() const { return std::abs(sup_large / sup_small - 1.0); }
};

/// sup of lhs / envelope over |m| <= m_range and M in big_m, then again with
/// the m range doubled.
inline ConvSupReport conv_sup_study(ConvCase which, double s, int m_range, const std::vector<int>& big_m) {
  const ConvCaseSpec c = conv_case_spec(which, s);
  require(c.applies, Errc::ConfigInvalid, "case " + to_string(which) + " does not apply at s = " + std::to_string(s));
  const ConvolutionTable table(c.x, c.y, 2 * m_range);
  ConvSupReport out;
  out.which = which;
  out.s = s;
  for (int M : big_m) {
    ConvSupRow row{M};
    for (int m = 0; m <= 2 * m_range; ++m) {
      const ConvValue v = table.lhs(M, m);
      out.worst_relative_remainder = std::max(out.worst_relative_remainder, v.remainder_bound / v.value);
      const double ratio = v.value / conv_envelope(c, M, m);
      if (ratio > row.sup) row.sup = ratio, row.argmax_m = m;
      if (m <= m_range && ratio > out.sup_small) out.sup_small = ratio;
      if (ratio > out.sup_large) {
        out.sup_large = ratio;
        out.argmax_m = m;
        out.argmax_M = M;
      }
    }
    out.per_M.push_back(row);
  }
  return out;
}

}  // namespace bbm
