#pragma once

// Draws from the Gaussian measure gamma_s, whose Fourier coefficients are
// c(n) = g_n / n^{s + 1/2} with Re g_n, Im g_n independent N(0, 1/2), and from
// its restriction to the energy ball {E[u] <= R}.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "bbmlab/error.hpp"
#include "bbmlab/field.hpp"

namespace bbm {

/// Counter-based seed derivation: sample i of a plan depends only on
/// (master_seed, stream, i), never on batch layout or thread count.
struct SeedPlan {
  std::uint64_t master_seed = 0;
  std::uint64_t stream = 0;

  static constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_for(std::uint64_t i) const {
    return splitmix64(splitmix64(master_seed ^ splitmix64(stream + 0x632BE59BD9B4E019ULL)) + i);
  }

  /// Independent sub-plan, e.g. for calibration draws.
  SeedPlan substream(std::uint64_t tag) const { return SeedPlan{master_seed, splitmix64(stream ^ (tag + 1))}; }

  std::mt19937_64 engine(std::uint64_t i) const { return std::mt19937_64(seed_for(i)); }
};

struct GaussianSpec {
  SobolevIndex s{1.5};
  int k_sample = 1 << 14;

  void validate() const {
    s.require_measure();
    require(k_sample >= 1, Errc::ConfigInvalid, "sampling cutoff must be >= 1");
  }
};

struct RestrictedSpec {
  GaussianSpec base;
  double radius = std::numeric_limits<double>::infinity();

  void validate() const {
    base.validate();
    require(radius >= 0.0, Errc::ConfigInvalid, "energy radius must be nonnegative");
  }
};

/// Sampler with the mode weights n^{-(s+1/2)} tabulated once.
class GaussianSampler {
 public:
  explicit GaussianSampler(const GaussianSpec& spec) : spec_(spec), weight_(static_cast<std::size_t>(spec.k_sample)) {
    spec.validate();
    const double e = spec.s.value + 0.5;
    for (int n = 1; n <= spec.k_sample; ++n) weight_[static_cast<std::size_t>(n - 1)] = std::pow(static_cast<double>(n), -e);
  }

  const GaussianSpec& spec() const { return spec_; }

  /// Draw i of gamma_s truncated at K_sample. Modes are generated in
  /// increasing n, so the first k modes agree for every K_sample >= k.
  TorusField draw(const SeedPlan& plan, std::uint64_t i) const {
    auto eng = plan.engine(i);
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    TorusField u(spec_.k_sample);
    auto c = u.coeffs();
    for (std::size_t k = 0; k < weight_.size(); ++k) {
      const double re = g(eng);
      const double im = g(eng);
      c[k] = cplx(re, im) * weight_[k];
    }
    return u;
  }

 private:
  GaussianSpec spec_;
  std::vector<double> weight_;
};

inline TorusField draw_field(const GaussianSpec& spec, const SeedPlan& plan, std::uint64_t i) {
  return GaussianSampler(spec).draw(plan, i);
}

struct RestrictedDraw {
  TorusField field;
  double energy = 0.0;
  bool accepted = false;
};

/// gamma_s draw with the indicator E[u] <= R. Expectations under the
/// restricted measure are unnormalized: sum over accepted draws / all draws.
inline RestrictedDraw draw_restricted(const GaussianSampler& sampler, double radius, const SeedPlan& plan,
                                      std::uint64_t i) {
  RestrictedDraw d{sampler.draw(plan, i)};
  d.energy = energy(d.field);
  d.accepted = d.energy <= radius;
  return d;
}

inline RestrictedDraw draw_restricted(const RestrictedSpec& spec, const SeedPlan& plan, std::uint64_t i) {
  RestrictedDraw d{draw_field(spec.base, plan, i)};
  d.energy = energy(d.field);
  d.accepted = d.energy <= spec.radius;
  return d;
}

/// Empirical q-quantile (inverse ECDF, order statistic ceil(q n)) of E[u]
/// over n_cal draws from a calibration substream.
inline double calibrate_R(const GaussianSpec& spec, double q, int n_cal, const SeedPlan& plan) {
  require(q > 0.0 && q < 1.0, Errc::InvalidArgument, "quantile must lie in (0, 1)");
  if (n_cal < 100) throw Error(Errc::DegenerateQuantile, "calibration needs at least 100 draws");
  const SeedPlan cal = plan.substream(0xCA1B);
  std::vector<double> e(static_cast<std::size_t>(n_cal));
  const GaussianSampler sampler(spec);
  for (int i = 0; i < n_cal; ++i) e[static_cast<std::size_t>(i)] = energy(sampler.draw(cal, static_cast<std::uint64_t>(i)));
  std::sort(e.begin(), e.end());
  auto k = static_cast<std::size_t>(std::ceil(q * n_cal));
  k = std::clamp<std::size_t>(k, 1, e.size());
  return e[k - 1];
}

/// E[E[u]^2] = 4 pi sum_{n=1}^{K} (1 + n) n^{-(2s+1)} under gamma_s at cutoff K.
inline double energy_second_moment(double s, int K) {
  auto term = [&](std::ptrdiff_t i) {
    const double n = static_cast<double>(i + 1);
    return (1.0 + n) * std::pow(n, -(2.0 * s + 1.0));
  };
  return 4.0 * kPi * pairwise_sum<double>(term, 0, K);
}

/// Upper bound on the expected E^2 mass above the sampling cutoff:
/// 4 pi sum_{n > K} (1 + n) n^{-(2s+1)} <= 4 pi (K^{1-2s}/(2s-1) + K^{-2s}/(2s)).
inline double energy_truncation_bound(double s, int K) {
  const double k = static_cast<double>(K);
  return 4.0 * kPi * (std::pow(k, 1.0 - 2.0 * s) / (2.0 * s - 1.0) + std::pow(k, -2.0 * s) / (2.0 * s));
}

}  // namespace bbm
