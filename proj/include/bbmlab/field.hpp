#pragma once

// Zero-mean real fields on the torus [0, 2pi), stored by their positive
// Fourier modes, together with the diagonal multipliers, norms and dealiased
// products used by the flow and the measure code.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>
#include <json.hpp>

#include "bbmlab/error.hpp"
#include "bbmlab/fft.hpp"
#include "bbmlab/summation.hpp"

namespace bbm {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Exponent of a Sobolev norm or of the Gaussian measure family.
struct SobolevIndex {
  double value;

  explicit constexpr SobolevIndex(double s) : value(s) {}

  /// Measures are only defined for s > 1/2; flow and tail experiments need s > 1.
  void require_measure() const {
    require(value > 0.5, Errc::ConfigInvalid, "Sobolev index must exceed 1/2, got " + std::to_string(value));
  }
  void require_flow() const {
    require(value > 1.0, Errc::ConfigInvalid, "experiment needs s > 1, got " + std::to_string(value));
  }
};

/// Real zero-mean field u(x) = sum_{n != 0} c(n) e^{inx} with c(-n) = conj(c(n)).
/// Only c(1..K) is stored, so realness and zero mean hold by construction.
class TorusField {
 public:
  TorusField() : coeffs_(1) {}
  explicit TorusField(int extent) : coeffs_(static_cast<std::size_t>(std::max(extent, 1))) {}
  explicit TorusField(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.resize(1);
  }

  static TorusField mode(int extent, int n, cplx value) {
    TorusField f(extent);
    f.at(n) = value;
    return f;
  }

  int extent() const { return static_cast<int>(coeffs_.size()); }

  /// Coefficient of any integer frequency (zero outside 1..K and at 0).
  cplx operator[](int n) const {
    if (n == 0) return {};
    const int a = n < 0 ? -n : n;
    if (a > extent()) return {};
    const cplx c = coeffs_[static_cast<std::size_t>(a - 1)];
    return n < 0 ? std::conj(c) : c;
  }

  /// Mutable access for 1 <= n <= K.
  cplx& at(int n) {
    require(n >= 1 && n <= extent(), Errc::InvalidArgument, "mode index out of range");
    return coeffs_[static_cast<std::size_t>(n - 1)];
  }

  std::span<const cplx> coeffs() const { return coeffs_; }
  std::span<cplx> coeffs() { return coeffs_; }

  /// Copy with a different extent (zero padded or truncated).
  TorusField with_extent(int extent) const {
    std::vector<cplx> c(static_cast<std::size_t>(std::max(extent, 1)));
    std::copy_n(coeffs_.begin(), std::min(c.size(), coeffs_.size()), c.begin());
    return TorusField(std::move(c));
  }

  TorusField& operator+=(const TorusField& o) {
    if (o.extent() > extent()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  TorusField& operator-=(const TorusField& o) {
    if (o.extent() > extent()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  TorusField& operator*=(double a) {
    for (auto& c : coeffs_) c *= a;
    return *this;
  }

  friend TorusField operator+(TorusField a, const TorusField& b) { return a += b; }
  friend TorusField operator-(TorusField a, const TorusField& b) { return a -= b; }
  friend TorusField operator*(double a, TorusField u) { return u *= a; }

  friend bool operator==(const TorusField&, const TorusField&) = default;

 private:
  std::vector<cplx> coeffs_;
};

/// Largest |c(n) - d(n)| over all modes.
inline double max_abs_diff(const TorusField& a, const TorusField& b) {
  const int k = std::max(a.extent(), b.extent());
  double m = 0.0;
  for (int n = 1; n <= k; ++n) m = std::max(m, std::abs(a[n] - b[n]));
  return m;
}

// ---------------------------------------------------------------------------
// Diagonal multipliers

template <class Multiplier>
TorusField apply_multiplier(const TorusField& u, Multiplier&& m) {
  TorusField out(u.extent());
  auto dst = out.coeffs();
  auto src = u.coeffs();
  for (int n = 1; n <= u.extent(); ++n) dst[n - 1] = m(n) * src[n - 1];
  return out;
}

/// P_N: keeps |n| <= N, extent unchanged.
inline TorusField project(const TorusField& u, int N) {
  require(N >= 0, Errc::InvalidArgument, "projection order must be nonnegative");
  TorusField out = u;
  auto c = out.coeffs();
  for (int n = N + 1; n <= out.extent(); ++n) c[n - 1] = 0.0;
  return out;
}

/// P_N with the extent shrunk to min(K, N) (at least 1).
inline TorusField truncate(const TorusField& u, int N) { return u.with_extent(std::max(1, std::min(N, u.extent()))); }

/// Dyadic block: Delta_0 = P_1, Delta_j = P_{2^j} - P_{2^{j-1}}.
inline TorusField lp_block(const TorusField& u, int j) {
  require(j >= 0, Errc::InvalidArgument, "Littlewood-Paley index must be nonnegative");
  if (j == 0) return project(u, 1);
  const long hi = 1L << j;
  const long lo = 1L << (j - 1);
  return apply_multiplier(u, [&](int n) { return (n > lo && n <= hi) ? 1.0 : 0.0; });
}

/// Number of dyadic blocks needed to cover modes 1..K.
inline int lp_block_count(int K) {
  int j = 0;
  while ((1L << j) < K) ++j;
  return j + 1;
}

/// |D_x|^sigma
inline TorusField frac_derivative(const TorusField& u, double sigma) {
  if (sigma == 0.0) return u;
  return apply_multiplier(u, [&](int n) { return std::pow(static_cast<double>(n), sigma); });
}

/// d/dx
inline TorusField x_derivative(const TorusField& u) {
  return apply_multiplier(u, [](int n) { return cplx(0.0, n); });
}

/// (1 + |D_x|)^{-1}
inline TorusField smoothing_inverse(const TorusField& u) {
  return apply_multiplier(u, [](int n) { return 1.0 / (1.0 + n); });
}

// ---------------------------------------------------------------------------
// Norms

/// sum_{n >= 1} n^{2s} |c(n)|^2 (positive frequencies only).
inline double sobolev_norm_sq(const TorusField& u, double s) {
  auto c = u.coeffs();
  auto term = [&](std::ptrdiff_t i) {
    const double w = s == 0.0 ? 1.0 : std::pow(static_cast<double>(i + 1), 2.0 * s);
    return w * std::norm(c[static_cast<std::size_t>(i)]);
  };
  return pairwise_sum<double>(term, 0, u.extent());
}

/// ||u||_{L^2}^2 = 4 pi * sobolev_norm_sq(u, 0).
inline double l2_norm_sq(const TorusField& u) { return 4.0 * kPi * sobolev_norm_sq(u, 0.0); }

/// Conserved quantity (||u||_{L^2}^2 + 4 pi ||u||_{H^{1/2}}^2)^{1/2}.
inline double energy(const TorusField& u) {
  auto c = u.coeffs();
  auto term = [&](std::ptrdiff_t i) { return (2.0 + static_cast<double>(i)) * std::norm(c[static_cast<std::size_t>(i)]); };
  return std::sqrt(4.0 * kPi * pairwise_sum<double>(term, 0, u.extent()));
}

// ---------------------------------------------------------------------------
// Physical grid

/// Equispaced grid with G points on [0, 2pi).
struct Grid {
  int points = 0;
  int dealias_factor = 3;

  /// Smallest power of two >= max(4K, factor*K + 1).
  static Grid for_extent(int K, int factor = 3) {
    require(factor >= 3, Errc::InvalidArgument, "dealias factor must be at least 3");
    const int need = std::max(4 * K, factor * K + 1);
    int g = 1;
    while (g < need) g <<= 1;
    return Grid{g, factor};
  }

  bool supports(int K) const { return points >= dealias_factor * K + 1; }

  /// Throws GridTooSmall unless the grid resolves frequencies up to `band`
  /// without aliasing.
  void require_exact(int band, const std::string& what) const {
    if (points <= band)
      throw Error(Errc::GridTooSmall, what + ": need more than " + std::to_string(band) +
                                          " grid points, have " + std::to_string(points));
  }
};

/// u(x_j) at x_j = 2 pi j / G. Point values are exact for any extent: modes
/// beyond G/2 are folded onto their aliases before the transform.
inline std::vector<double> to_physical(const TorusField& u, int G) {
  require(G >= 2, Errc::GridTooSmall, "grid needs at least 2 points");
  std::vector<cplx> half(static_cast<std::size_t>(G / 2 + 1));
  auto c = u.coeffs();
  if (2 * u.extent() < G) {
    std::copy(c.begin(), c.end(), half.begin() + 1);
  } else {
    for (int n = 1; n <= u.extent(); ++n) {
      const cplx v = c[static_cast<std::size_t>(n - 1)];
      const int k = n % G;
      if (2 * k <= G) half[static_cast<std::size_t>(k)] += v;
      const int km = (G - k) % G;  // bin of -n
      if (2 * km <= G) half[static_cast<std::size_t>(km)] += std::conj(v);
    }
  }
  std::vector<double> out(static_cast<std::size_t>(G));
  detail::real_fft(G).backward(half, out);
  return out;
}

struct Spectrum {
  TorusField field;
  double mean = 0.0;  // the zero mode, which a TorusField cannot hold
};

/// Fourier coefficients 1..extent of grid values. Requires extent < G/2.
inline Spectrum from_physical(std::span<const double> values, int extent) {
  const int G = static_cast<int>(values.size());
  if (2 * extent >= G)
    throw Error(Errc::GridTooSmall, "extent " + std::to_string(extent) + " not resolved by " + std::to_string(G) + " points");
  std::vector<cplx> half(static_cast<std::size_t>(G / 2 + 1));
  detail::real_fft(G).forward(values, half);
  Spectrum out{TorusField(extent), half[0].real() / G};
  auto c = out.field.coeffs();
  for (int n = 1; n <= extent; ++n) c[n - 1] = half[static_cast<std::size_t>(n)] / static_cast<double>(G);
  return out;
}

/// Trapezoid quadrature (2 pi / G) sum_j f(x_j); exact for trigonometric
/// polynomials of degree < G.
inline double integrate(std::span<const double> values) {
  return kTwoPi / static_cast<double>(values.size()) * pairwise_sum(values);
}

/// Pointwise product u*v, exact up to frequency `out_extent` (default: the full
/// band K_u + K_v). The grid must satisfy G > K_u + K_v + out_extent.
inline Spectrum product(const TorusField& u, const TorusField& v, const Grid& grid, int out_extent = 0) {
  const int band = u.extent() + v.extent();
  if (out_extent <= 0) out_extent = band;
  grid.require_exact(band + out_extent, "product");
  const auto pu = to_physical(u, grid.points);
  const auto pv = to_physical(v, grid.points);
  std::vector<double> w(pu.size());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = pu[j] * pv[j];
  return from_physical(w, out_extent);
}

/// u at a single point.
inline double evaluate(const TorusField& u, double x, int derivative = 0) {
  double acc = 0.0;
  for (int n = 1; n <= u.extent(); ++n) {
    const cplx e = std::polar(1.0, n * x);
    cplx d = 1.0;
    for (int k = 0; k < derivative; ++k) d *= cplx(0.0, n);
    acc += (d * u[n] * e).real();
  }
  return 2.0 * acc;
}

/// sup_x |u(x)|. The grid is oversampled to at least 16K points and every grid
/// maximum within 10% of the largest is refined with Brent's method, so the
/// result is exact to rounding.
inline double linf_norm(const TorusField& u, const Grid& grid) {
  int G = std::max(grid.points, 16 * u.extent());
  int g = 1;
  while (g < G) g <<= 1;
  G = g;
  const auto vals = to_physical(u, G);
  double top = 0.0;
  for (double v : vals) top = std::max(top, std::abs(v));
  if (top == 0.0) return 0.0;
  const double h = kTwoPi / G;
  double best = top;
  for (int j = 0; j < G; ++j) {
    const double a = std::abs(vals[static_cast<std::size_t>(j)]);
    if (a < 0.9 * top) continue;
    const double l = std::abs(vals[static_cast<std::size_t>((j + G - 1) % G)]);
    const double r = std::abs(vals[static_cast<std::size_t>((j + 1) % G)]);
    if (a < l || a < r) continue;
    const double sign = vals[static_cast<std::size_t>(j)] >= 0.0 ? 1.0 : -1.0;
    auto neg = [&](double x) { return -sign * evaluate(u, x); };
    const auto [x, fx] = boost::math::tools::brent_find_minima(neg, (j - 1) * h, (j + 1) * h, 40);
    (void)x;
    best = std::max(best, -fx);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Serialization: {"extent": K, "coeffs": [[n, re, im], ...]}

inline nlohmann::json to_json(const TorusField& u) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (int n = 1; n <= u.extent(); ++n) {
    const cplx c = u[n];
    if (c != cplx{}) coeffs.push_back({n, c.real(), c.imag()});
  }
  return {{"extent", u.extent()}, {"coeffs", std::move(coeffs)}};
}

inline TorusField field_from_json(const nlohmann::json& j) {
  const int K = j.at("extent").get<int>();
  require(K >= 1, Errc::ConfigInvalid, "field extent must be >= 1");
  TorusField u(K);
  for (const auto& t : j.at("coeffs")) {
    const int n = t.at(0).get<int>();
    require(n >= 1 && n <= K, Errc::ConfigInvalid, "field mode " + std::to_string(n) + " outside 1..extent");
    u.at(n) = cplx(t.at(1).get<double>(), t.at(2).get<double>());
  }
  return u;
}

}  // namespace bbm
