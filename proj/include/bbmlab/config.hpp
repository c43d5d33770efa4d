#pragma once

// Experiment configuration shared by every CLI subcommand. Serialized
// verbatim into each run's JSON summary.

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bbmlab/error.hpp"

namespace bbm {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr std::uint64_t kDefaultSeed = 20240917;

struct ExperimentConfig {
  std::string kind;

  std::optional<double> s;
  int N = 64;
  int M = 16;
  int k_sample = 512;  // sampling cutoff; flow fixtures use it as the field extent

  // Energy ball: explicit R, or the q-quantile of the energy under gamma_s.
  std::optional<double> R;
  double q = 0.5;

  double t = 0.5;
  double t_end = 1.0;
  std::optional<double> dt;
  int snapshots = 10;

  std::size_t n_samples = 100000;
  std::size_t count = 10;
  std::vector<double> p_grid{2, 4, 6, 8, 10};
  std::vector<int> decay_ns;
  double kappa = 1.0;
  bool hs_validity = false;

  std::string term = "total";
  std::size_t mc_check = 0;
  bool decay = false;

  std::optional<double> x, y;
  std::string conv_case;
  int m_range = 4096;
  std::vector<int> big_m{16, 32, 64, 128, 256, 512};

  std::string set = "ball";
  double radius_q = 0.2;
  int box_mode = 1;
  double box_lo = 0.5;

  std::string fixture = "gaussian";
  std::string suite = "fast";
  double scale = 1.0;
  std::string mutate;

  std::uint64_t seed = kDefaultSeed;
  std::string out_dir;
  int threads = 1;

  double require_s() const {
    if (!s) throw Error(Errc::ConfigInvalid, "--s is required for '" + kind + "'");
    return *s;
  }

  /// Domain checks that do not depend on the subcommand's own logic.
  void validate() const {
    auto need = [](bool ok, const std::string& what) {
      if (!ok) throw Error(Errc::ConfigInvalid, what);
    };
    need(N >= 1, "N must be >= 1");
    need(M >= 0, "M must be >= 0");
    need(k_sample >= 1, "sampling cutoff must be >= 1");
    need(q > 0.0 && q < 1.0, "q must lie in (0, 1)");
    need(!R || *R > 0.0, "R must be positive");
    need(!dt || *dt > 0.0, "dt must be positive");
    need(n_samples >= 1, "sample count must be >= 1");
    need(kappa > 0.0, "kappa must be positive");
    need(radius_q > 0.0 && radius_q < 1.0, "radius quantile must lie in (0, 1)");
    need(scale > 0.0, "scale must be positive");
    need(threads >= 1, "threads must be >= 1");
    need(m_range >= 1, "m range must be >= 1");
    for (double p : p_grid) need(p >= 1.0, "p must be >= 1");
    if (s) {
      const bool wick_only = kind == "wick" || kind == "convbounds" || kind == "sample" || kind == "hyper";
      if (wick_only) {
        need(*s > 0.5, "s must exceed 1/2");
      } else {
        need(*s > 1.0, "s must exceed 1 for flow and tail experiments");
      }
    }
  }

  /// Output directory: --out, then $BBMLAB_OUT_DIR, then ./bbmlab-out.
  std::string resolved_out_dir() const {
    if (!out_dir.empty()) return out_dir;
    if (const char* e = std::getenv("BBMLAB_OUT_DIR"); e && *e) return e;
    return "bbmlab-out";
  }
};

inline nlohmann::json to_json(const ExperimentConfig& c) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  return {{"kind", c.kind},
          {"s", opt(c.s)},
          {"N", c.N},
          {"M", c.M},
          {"k_sample", c.k_sample},
          {"R", opt(c.R)},
          {"q", c.q},
          {"t", c.t},
          {"t_end", c.t_end},
          {"dt", opt(c.dt)},
          {"snapshots", c.snapshots},
          {"n_samples", c.n_samples},
          {"count", c.count},
          {"p_grid", c.p_grid},
          {"decay_ns", c.decay_ns},
          {"kappa", c.kappa},
          {"hs_validity", c.hs_validity},
          {"term", c.term},
          {"mc_check", c.mc_check},
          {"decay", c.decay},
          {"x", opt(c.x)},
          {"y", opt(c.y)},
          {"case", c.conv_case},
          {"m_range", c.m_range},
          {"big_m", c.big_m},
          {"set", c.set},
          {"radius_q", c.radius_q},
          {"box_mode", c.box_mode},
          {"box_lo", c.box_lo},
          {"fixture", c.fixture},
          {"suite", c.suite},
          {"scale", c.scale},
          {"mutate", c.mutate},
          {"seed", c.seed}};
}

}  // namespace bbm
