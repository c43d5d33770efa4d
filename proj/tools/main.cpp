// bbmlab: experiment runner for the truncated BBM flow and its Gaussian measures.
//
// Every subcommand prints its CSV to stdout and writes <kind>.csv and
// <kind>.json (config, seed, version, results, gates) to the output directory.
// Exit status: 0 all gates pass, 1 a gate or a module check failed, 2 bad config.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bbmlab/bbmlab.hpp"

using namespace bbm;
using json = nlohmann::json;

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : cols_(header.size()) { line(header); }
  void row(const std::vector<std::string>& cells) {
    if (cells.size() != cols_) throw Error(Errc::InvalidArgument, "CSV row width mismatch");
    line(cells);
  }
  std::string str() const { return out_.str(); }

 private:
  void line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << quote(cells[i]);
    out_ << '\n';
  }
  std::size_t cols_;
  std::ostringstream out_;
};

struct Gate {
  std::string name;
  bool passed;
  std::string detail;
};

struct Run {
  explicit Run(const ExperimentConfig& c) : cfg(c) {}

  const ExperimentConfig& cfg;
  json results = json::object();
  std::vector<Gate> gates;
  std::vector<std::pair<std::string, std::string>> csvs;  // (file stem, content)

  void gate(std::string name, bool ok, std::string detail) { gates.push_back({std::move(name), ok, std::move(detail)}); }
  void csv(std::string stem, const Csv& c) { csvs.emplace_back(std::move(stem), c.str()); }

  int finish() const {
    namespace fs = std::filesystem;
    const fs::path dir = cfg.resolved_out_dir();
    fs::create_directories(dir);
    std::vector<std::string> written;
    for (const auto& [stem, text] : csvs) {
      std::cout << text;
      const fs::path p = dir / (stem + ".csv");
      std::ofstream(p) << text;
      written.push_back(p.string());
    }
    bool ok = true;
    json g = json::array();
    for (const auto& x : gates) {
      g.push_back({{"gate", x.name}, {"passed", x.passed}, {"detail", x.detail}});
      ok = ok && x.passed;
    }
    const json summary{{"version", std::string("bbmlab ") + kVersion},
                       {"seed", cfg.seed},
                       {"config", to_json(cfg)},
                       {"results", results},
                       {"gates", g},
                       {"passed", ok}};
    const fs::path jp = dir / (stem_of_kind() + ".json");
    std::ofstream(jp) << summary.dump(2) << '\n';
    written.push_back(jp.string());
    for (const auto& x : gates) std::cerr << (x.passed ? "PASS " : "FAIL ") << x.name << ": " << x.detail << '\n';
    for (const auto& w : written) std::cerr << "wrote " << w << '\n';
    return ok ? 0 : 1;
  }

  std::string stem_of_kind() const { return cfg.kind == "suite" ? "suite-" + cfg.suite : cfg.kind; }
};

json fit_json(const TailFit& f) {
  return {{"C", f.C},           {"c", f.c},           {"alpha", f.alpha},  {"alpha_stderr", f.alpha_stderr},
          {"alpha_lower", f.alpha_lower()}, {"alpha_loglog", f.alpha_loglog}, {"bins", f.bins}, {"t_min", f.t_min},
          {"t_max", f.t_max}};
}

json estimate_json(const McEstimate& e) { return {{"estimate", e.mean}, {"stderr", e.std_error}, {"n", e.n}}; }

double energy_radius(const ExperimentConfig& c, double s) {
  return c.R ? *c.R : energy_quantile(s, c.q, SeedPlan{c.seed, 0}, 20000, c.k_sample);
}

SetSpec make_set(const ExperimentConfig& c, double s) {
  if (c.set == "full") return SetSpec::full();
  if (c.set == "ball") return SetSpec::h12_ball(h12_quantile(s, c.radius_q, SeedPlan{c.seed, 0}, 20000, c.k_sample));
  if (c.set == "box") return SetSpec::mode_box(c.box_mode, c.box_lo, std::numeric_limits<double>::infinity());
  throw Error(Errc::ConfigInvalid, "unknown set '" + c.set + "' (expected ball, box or full)");
}

// ---------------------------------------------------------------------------

int cmd_sample(const ExperimentConfig& c) {
  Run run(c);
  const double s = c.require_s();
  const GaussianSampler sampler(GaussianSpec{SobolevIndex(s), c.k_sample});
  const double R = energy_radius(c, s);
  const SeedPlan plan{c.seed, 0};
  Csv csv({"index", "energy", "h12_norm", "hs_norm", "accepted", "seed"});
  json fields = json::array();
  std::size_t accepted = 0;
  for (std::size_t i = 0; i < c.count; ++i) {
    const RestrictedDraw d = draw_restricted(sampler, R, plan, i);
    accepted += d.accepted ? 1 : 0;
    csv.row({std::to_string(i), num(d.energy), num(std::sqrt(sobolev_norm_sq(d.field, 0.5))),
             num(std::sqrt(sobolev_norm_sq(d.field, s))), d.accepted ? "1" : "0", std::to_string(c.seed)});
    if (c.count <= 32) fields.push_back(to_json(d.field));
  }
  run.csv("sample", csv);
  const auto [lo, hi] = wilson_interval(accepted, c.count);
  run.results = {{"R", R}, {"acceptance", double(accepted) / double(c.count)}, {"acceptance_ci", {lo, hi}}, {"fields", fields}};
  return run.finish();
}

int cmd_flow(const ExperimentConfig& c) {
  Run run(c);
  TorusField u0;
  if (c.fixture == "cos") {
    u0 = TorusField::mode(1, 1, 0.5);
  } else if (c.fixture == "gaussian") {
    u0 = draw_field(GaussianSpec{SobolevIndex(c.require_s()), c.k_sample}, SeedPlan{c.seed, 0}, 0);
  } else {
    std::ifstream in(c.fixture);
    if (!in) throw Error(Errc::ConfigInvalid, "cannot open fixture '" + c.fixture + "'");
    u0 = field_from_json(json::parse(in));
  }
  FlowConfig fc;
  fc.N = c.N;
  fc.t_end = c.t_end;
  fc.dt = c.dt;
  fc.snapshots = c.snapshots;
  const FlowResult r = evolve(u0, fc, Grid::for_extent(c.N));
  const double e0 = energy(u0);
  Csv csv({"t", "energy", "relative_drift", "seed"});
  for (const auto& snap : r.trajectory)
    csv.row({num(snap.t), num(snap.energy), num(std::abs(snap.energy - e0) / e0), std::to_string(c.seed)});
  run.csv("flow", csv);
  run.results = {{"max_drift", r.max_drift}, {"steps", r.steps}, {"dt", r.dt}, {"drift_budget", drift_budget(fc)}};
  if (r.final_field.extent() <= 64) run.results["final_field"] = to_json(r.final_field);
  run.gate("energy drift", r.max_drift <= drift_budget(fc), "max drift " + fmt(r.max_drift) + " (<= " + fmt(drift_budget(fc)) + ")");
  // Only P_1 keeps cos x a pure rotation: c(1, t) = c(1, 0) e^{-it/2}.
  if (c.fixture == "cos" && c.N == 1) {
    const double err = std::abs(r.final_field[1] - std::polar(0.5, -0.5 * c.t_end));
    run.results["rotation_error"] = err;
    run.gate("exact rotation fixture", r.max_drift <= 1e-13 && err <= 1e-10,
             "max drift " + fmt(r.max_drift) + " (<= 1e-13), phase error " + fmt(err) + " (<= 1e-10)");
  }
  return run.finish();
}

int cmd_fn(const ExperimentConfig& c) {
  Run run(c);
  const double s = c.require_s();
  const int N = c.N;
  const GaussianSampler sampler(GaussianSpec{SobolevIndex(s), N});
  const Grid grid = Grid::for_extent(N);
  const std::array<SymbolEvaluator, 3> ev{SymbolEvaluator(TrilinearSymbol::make(SymbolTerm::F1, s), N),
                                          SymbolEvaluator(TrilinearSymbol::make(SymbolTerm::F2, s), N),
                                          SymbolEvaluator(TrilinearSymbol::make(SymbolTerm::F3, s), N)};
  const auto weights = direct_weights(N, s);
  Csv csv({"index", "f1", "f2", "f3", "physical_total", "spectral_total", "fd_total", "direct_total", "seed"});
  double worst_fd = 0.0, worst_rel = 0.0;
  for (std::size_t i = 0; i < c.count; ++i) {
    const TorusField u = sampler.draw(SeedPlan{c.seed, 0}, i);
    const FTerms ph = f_physical(u, N, s, grid);
    const std::array<double, 3> phk{ph.f1, ph.f2, ph.f3};
    double spec = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      const double v = f_spectral_detail(u, N, 0, ev[k]).value;
      spec += v;
      worst_rel = std::max(worst_rel, std::abs(v - phk[k]) / std::abs(v));
    }
    const double fd = f_total_fd(u, N, s, 1e-4, grid);
    worst_fd = std::max(worst_fd, std::abs(fd - ph.total()) / (1.0 + std::abs(ph.total())));
    csv.row({std::to_string(i), num(ph.f1), num(ph.f2), num(ph.f3), num(ph.total()), num(spec), num(fd),
             num(f_total_direct(u, N, weights, grid)), std::to_string(c.seed)});
  }
  run.csv("fn", csv);
  run.results = {{"max_fd_error", worst_fd}, {"max_physical_vs_spectral", worst_rel}};
  run.gate("decomposition identity", worst_fd <= 1e-5, "fd vs physical " + fmt(worst_fd) + " (<= 1e-5 (1+|F|))");
  run.gate("physical vs spectral", worst_rel <= 1e-9, "relative " + fmt(worst_rel) + " (<= 1e-9)");
  return run.finish();
}

int cmd_wick(const ExperimentConfig& c) {
  Run run(c);
  const double s = c.require_s();
  const TrilinearSymbol sym = TrilinearSymbol::make(parse_term(c.term), s);
  if (c.M >= c.N) throw Error(Errc::ConfigInvalid, "need N > M");
  const ContractionSum exact = wick_variance(sym, sym, s, c.N, c.M);
  json per_sigma = json::object();
  for (std::size_t k = 0; k < kPermutations.size(); ++k) per_sigma[permutation_label(k)] = exact.per_sigma[k];
  run.results = {{"term", sym.label()}, {"exact_variance", exact.total}, {"exact_l2", std::sqrt(std::max(0.0, exact.total))},
                 {"per_permutation", per_sigma}};

  Csv csv({"term", "s", "N", "M", "exact_variance", "exact_l2", "mc_variance", "mc_stderr", "z", "n", "seed"});
  std::vector<std::string> row{sym.label(), num(s), std::to_string(c.N), std::to_string(c.M), num(exact.total),
                               num(std::sqrt(std::max(0.0, exact.total)))};
  if (c.mc_check > 0) {
    const GaussianSampler sampler(GaussianSpec{SobolevIndex(s), c.N});
    const SymbolEvaluator ev(sym, c.N);
    const SeedPlan plan{c.seed, 0};
    const auto v = parallel_map<double>(c.mc_check, [&](std::size_t i) { return f_spectral_detail(sampler.draw(plan, i), c.N, c.M, ev).value; });
    const McEstimate mc = mc_variance(v, c.seed);
    const double z = std::abs(mc.mean - exact.total) / mc.std_error;
    row.insert(row.end(), {num(mc.mean), num(mc.std_error), num(z), std::to_string(c.mc_check), std::to_string(c.seed)});
    run.results["mc"] = {{"variance", mc.mean}, {"stderr", mc.std_error}, {"z", z}, {"n", c.mc_check}};
    run.gate("Wick oracle vs Monte Carlo", z <= 5.0, "z " + fmt(z) + " (<= 5)");
  } else {
    row.insert(row.end(), {"", "", "", "0", std::to_string(c.seed)});
  }
  csv.row(row);
  run.csv("wick", csv);

  if (c.decay) {
    const DecayCurve d = decay_curve(sym.term, s, c.N);
    Csv dc({"term", "s", "N_max", "M", "exact_l2"});
    for (const auto& p : d.points) dc.row({sym.label(), num(s), std::to_string(c.N), std::to_string(p.M), num(p.l2)});
    run.csv("wick-decay", dc);
    const double bound = -predicted_rate(sym.term, s) + 0.1;
    run.results["decay"] = {{"slope", d.slope}, {"saturation_slope", d.saturation_slope}, {"monotone", d.monotone}, {"bound", bound}};
    run.gate("decay rate", d.slope <= bound, "slope " + fmt(d.slope) + " (<= " + fmt(bound) + ")");
  }
  return run.finish();
}

int cmd_convbounds(const ExperimentConfig& c) {
  Run run(c);
  if (!c.conv_case.empty()) {
    const ConvCase which = parse_conv_case(c.conv_case);
    const double s = c.require_s();
    const ConvSupReport r = conv_sup_study(which, s, c.m_range, c.big_m);
    const ConvCaseSpec spec = conv_case_spec(which, s);
    Csv csv({"case", "s", "x", "y", "M", "sup_ratio", "argmax_m"});
    for (const auto& row : r.per_M)
      csv.row({to_string(which), num(s), num(spec.x), num(spec.y), std::to_string(row.M), num(row.sup), std::to_string(row.argmax_m)});
    run.csv("convbounds", csv);
    run.results = {{"sup", r.sup_small},         {"sup_doubled", r.sup_large}, {"change", r.change()},
                   {"argmax_m", r.argmax_m},     {"argmax_M", r.argmax_M},    {"worst_relative_remainder", r.worst_relative_remainder}};
    run.gate("convolution envelope", std::isfinite(r.sup_large) && r.change() < 0.05,
             "sup " + fmt(r.sup_large) + ", change on doubling the m range " + fmt(r.change()) + " (< 0.05)");
    return run.finish();
  }
  if (!c.x || !c.y) throw Error(Errc::ConfigInvalid, "convbounds needs --case (with --s) or both --x and --y");
  const ConvolutionTable table(*c.x, *c.y, c.m_range);
  Csv csv({"x", "y", "M", "m", "lhs", "remainder_bound"});
  for (int M : c.big_m)
    for (int m = 0; m <= c.m_range; ++m) {
      const ConvValue v = table.lhs(M, m);
      csv.row({num(*c.x), num(*c.y), std::to_string(M), std::to_string(m), num(v.value), num(v.remainder_bound)});
    }
  run.csv("convbounds", csv);
  run.results = {{"window", table.window()}};
  return run.finish();
}

void tail_rows(Csv& csv, const TailCurve& t, std::uint64_t seed) {
  const double n = static_cast<double>(t.n);
  for (const auto& p : t.points)
    csv.row({t.quantity, num(p.t), num(p.survival), num(std::sqrt(p.survival * (1.0 - p.survival) / n)), num(p.ci_lo), num(p.ci_hi),
             std::to_string(p.exceedances), std::to_string(t.n), std::to_string(seed)});
}

int cmd_tails(const ExperimentConfig& c) {
  Run run(c);
  const double s = c.require_s();
  const double R = energy_radius(c, s);
  const ObservableSet obs = collect_observables(c.N, s, R, c.n_samples, SeedPlan{c.seed, 0x7A1}, {}, c.k_sample);
  const TailCurve tf = tail_fn(obs), td = tail_dx_inf(obs, c.kappa), th = tail_hs(obs, c.kappa, c.hs_validity);
  Csv csv({"quantity", "t", "estimate", "stderr", "ci_lo", "ci_hi", "exceedances", "n", "seed"});
  for (const TailCurve* t : {&tf, &td, &th}) tail_rows(csv, *t, c.seed);
  run.csv("tails", csv);
  const double gdx = 0.7 * predicted_dx_inf_exponent(s, c.kappa), ghs = 0.7 * predicted_hs_exponent(s, c.kappa);
  run.results = {{"R", R},
                 {"mass", tf.mass},
                 {"fn", fit_json(tf.fit)},
                 {"dx_inf", fit_json(td.fit)},
                 {"hs", fit_json(th.fit)},
                 {"predicted_dx_inf_exponent", predicted_dx_inf_exponent(s, c.kappa)},
                 {"predicted_hs_exponent", predicted_hs_exponent(s, c.kappa)},
                 {"hs_validity_threshold", hs_validity_threshold(c.N, c.kappa)}};
  run.gate("|F_N| tail exponent", tf.fit.alpha_lower() >= 0.8, "alpha lower " + fmt(tf.fit.alpha_lower()) + " (>= 0.8)");
  run.gate("||d_x P_N u||_inf tail exponent", td.fit.alpha_lower() >= gdx, "alpha lower " + fmt(td.fit.alpha_lower()) + " (>= " + fmt(gdx) + ")");
  run.gate("||P_N u||_{H^s} tail exponent", th.fit.alpha_lower() >= ghs, "alpha lower " + fmt(th.fit.alpha_lower()) + " (>= " + fmt(ghs) + ")");
  return run.finish();
}

void moment_rows(Csv& csv, const std::string& quantity, const MomentTable& t, std::size_t n, std::uint64_t seed) {
  for (const auto& r : t.rows)
    csv.row({quantity, num(r.p), num(r.norm), num(r.std_error), num(r.cv), num(r.normalized), std::to_string(n), std::to_string(seed)});
}

json moments_json(const MomentTable& t) {
  return {{"mass", t.mass}, {"ratio", t.ratio()}, {"ratio_upper", t.ratio_upper()}, {"p_exponent", t.p_exponent},
          {"p_exponent_upper", t.p_exponent_upper()}};
}

int cmd_lp(const ExperimentConfig& c) {
  Run run(c);
  const double s = c.require_s();
  const double R = energy_radius(c, s);
  const MomentTable t = lp_growth(c.N, s, R, c.p_grid, c.n_samples, SeedPlan{c.seed, 0x7A1});
  Csv csv({"quantity", "p", "estimate", "stderr", "cv", "normalized", "n", "seed"});
  moment_rows(csv, "||F_N||_p", t, c.n_samples, c.seed);
  run.csv("lp", csv);
  run.results = moments_json(t);
  run.results["R"] = R;
  run.gate("L^p norm / p bounded", t.ratio_upper() <= 3.0, "max/min ratio " + fmt(t.ratio_upper()) + " (<= 3)");
  return run.finish();
}

int cmd_hyper(const ExperimentConfig& c) {
  Run run(c);
  const double s = c.require_s();
  if (c.M >= c.N) throw Error(Errc::ConfigInvalid, "need N > M");
  const SeedPlan plan{c.seed, 0x4E};
  const HyperGrowth h = hyper_growth(c.N, c.M, s, c.p_grid, c.n_samples, plan);
  Csv csv({"quantity", "p", "estimate", "stderr", "cv", "normalized", "n", "seed"});
  moment_rows(csv, "||F_N - F_M||_p", h.moments, c.n_samples, c.seed);
  run.csv("hyper", csv);
  const auto& l2 = h.moments.rows.front();
  run.results = moments_json(h.moments);
  run.results["exact_l2"] = h.exact_l2;
  run.gate("p-exponent", h.moments.p_exponent_upper() <= 1.7, "upper " + fmt(h.moments.p_exponent_upper()) + " (<= 1.7)");
  if (l2.p == 2.0) {
    const double z = std::abs(l2.norm - h.exact_l2) / l2.std_error;
    run.gate("L^2 norm vs Wick oracle", z <= 5.0, "z " + fmt(z) + " (<= 5)");
  }
  if (!c.decay_ns.empty()) {
    const HyperDecay d = hyper_decay(c.decay_ns, s, c.p_grid, c.n_samples, plan.substream(1));
    Csv dc({"quantity", "N", "estimate", "stderr", "n", "seed"});
    json slopes = json::array();
    for (std::size_t k = 0; k < d.p.size(); ++k) {
      for (std::size_t j = 0; j < d.N.size(); ++j)
        dc.row({"||F_2N - F_N||_" + fmt(d.p[k]), std::to_string(d.N[j]), num(d.norm[k][j]), num(d.std_error[k][j]),
                std::to_string(c.n_samples), std::to_string(c.seed)});
      slopes.push_back({{"p", d.p[k]}, {"slope", d.slope[k]}, {"slope_upper", d.slope_upper[k]}});
      run.gate("N-decay p=" + fmt(d.p[k]), d.slope_upper[k] <= d.predicted + 0.1,
               "slope upper " + fmt(d.slope_upper[k]) + " (<= " + fmt(d.predicted + 0.1) + ")");
    }
    run.csv("hyper-decay", dc);
    run.results["decay"] = {{"predicted", d.predicted}, {"slopes", slopes}};
  }
  return run.finish();
}

int cmd_cov(const ExperimentConfig& c) {
  Run run(c);
  const double s = c.require_s();
  const double R = energy_radius(c, s);
  const SetSpec A = make_set(c, s);
  const CovIdentity r = cov_identity(c.N, s, R, c.t, A, c.n_samples, SeedPlan{c.seed, 0xC07}, c.k_sample);
  Csv csv({"quantity", "t", "estimate", "stderr", "n", "seed"});
  csv.row({"lhs gamma(Phi_t A)", num(c.t), num(r.lhs.mean), num(r.lhs.std_error), std::to_string(r.lhs.n), std::to_string(c.seed)});
  csv.row({"rhs int_A density", num(c.t), num(r.rhs.mean), num(r.rhs.std_error), std::to_string(r.rhs.n), std::to_string(c.seed)});
  run.csv("cov", csv);
  run.results = {{"R", R}, {"set", A.describe()}, {"lhs", estimate_json(r.lhs)}, {"rhs", estimate_json(r.rhs)}, {"z", r.z},
                 {"rhs_weights", {{"ess", r.weights.ess}, {"ess_fraction", r.weights.ess_fraction}, {"pareto_k", r.weights.pareto_k}}}};
  run.gate("change of variables", r.z <= 3.0, "z " + fmt(r.z) + " (<= 3)");
  return run.finish();
}

int cmd_transport(const ExperimentConfig& c) {
  Run run(c);
  const double s = c.require_s();
  const double R = energy_radius(c, s);
  const SetSpec A = make_set(c, s);
  const TransportGrowth g = transport_growth(c.N, s, R, A, c.t_end, c.snapshots, c.n_samples, SeedPlan{c.seed, 0x7E8}, c.k_sample);
  Csv csv({"quantity", "t", "estimate", "stderr", "n", "seed"});
  for (const auto& row : g.rows)
    csv.row({"gamma(Phi_t A)", num(row.t), num(row.mass.mean), num(row.mass.std_error), std::to_string(row.mass.n), std::to_string(c.seed)});
  run.csv("transport", csv);
  run.results = {{"R", R},
                 {"set", A.describe()},
                 {"total_mass", g.total_mass},
                 {"c_upper", g.c_upper},
                 {"c_lower", g.c_lower},
                 {"density_exponent_at_t_end", g.density_exponent(c.t_end)}};
  run.gate("transport envelope", g.envelopes_exist(), "C_upper " + fmt(g.c_upper) + ", C_lower " + fmt(g.c_lower));
  return run.finish();
}

int cmd_suite(const ExperimentConfig& c) {
  Run run(c);
  SuiteOptions o;
  o.seed = c.seed;
  o.scale = c.scale;
  if (c.mutate == "f2-sign") {
    o.coeff[1] = -o.coeff[1];
  } else if (!c.mutate.empty()) {
    throw Error(Errc::ConfigInvalid, "unknown mutation '" + c.mutate + "' (expected f2-sign)");
  }
  std::vector<GateResult> gates;
  if (c.suite == "fast") {
    gates = suite_fast(o);
  } else {
    for (int k = 1; k <= 8; ++k) {
      gates.push_back(run_criterion(k, o));
      std::cerr << "criterion " << k << (gates.back().passed ? " PASS" : " FAIL") << " (" << fmt(gates.back().seconds) << " s)\n";
    }
  }
  Csv csv({"criterion", "gate", "passed", "seconds", "detail"});
  json detail = json::array();
  for (const auto& g : gates) {
    csv.row({std::to_string(g.criterion), g.name, g.passed ? "1" : "0", num(g.seconds), g.detail});
    json m = json::object();
    for (const auto& [k, v] : g.metrics) m[k] = v;
    detail.push_back({{"criterion", g.criterion}, {"gate", g.name}, {"passed", g.passed}, {"seconds", g.seconds}, {"metrics", m}});
    run.gate(g.name, g.passed, g.detail);
  }
  run.csv("suite-" + c.suite, csv);
  run.results = {{"gates", detail}};
  for (const auto& g : gates)
    if (!g.passed) {
      std::cerr << "first failing gate: " << g.name << ": " << g.detail << '\n';
      break;
    }
  return run.finish();
}

}  // namespace

int main(int argc, char** argv) {
  ExperimentConfig cfg;
  CLI::App app{"bbmlab: experiments on the truncated BBM flow and its Gaussian measures"};
  app.set_config("--config", "", "key = value file; command-line flags override it");
  app.set_version_flag("--version", std::string("bbmlab ") + kVersion);
  app.fallthrough();
  app.require_subcommand(1, 1);

  app.add_option_function<double>("--s", [&](const double& v) { cfg.s = v; }, "Sobolev index s");
  app.add_option("--n", cfg.N, "truncation N (N_max for wick --decay)");
  app.add_option("--m", cfg.M, "lower truncation M");
  app.add_option("--k", cfg.k_sample, "sampling cutoff / field extent");
  app.add_option_function<double>("--R", [&](const double& v) { cfg.R = v; }, "energy-ball radius");
  app.add_option("--q", cfg.q, "energy quantile fixing R when --R is absent");
  app.add_option("--t", cfg.t, "flow time");
  app.add_option("--t-end", cfg.t_end, "flow horizon");
  app.add_option_function<double>("--dt", [&](const double& v) { cfg.dt = v; }, "fixed time step");
  app.add_option("--snapshots", cfg.snapshots, "recorded intervals along a trajectory");
  app.add_option("--samples", cfg.n_samples, "Monte Carlo sample count");
  app.add_option("--count", cfg.count, "number of draws (sample, fn)");
  app.add_option("--p-grid", cfg.p_grid, "moment orders")->delimiter(',');
  app.add_option("--decay-ns", cfg.decay_ns, "smaller indices N of the pairs (2N, N)")->delimiter(',');
  app.add_option("--kappa", cfg.kappa, "tail power kappa");
  app.add_flag("--hs-validity", cfg.hs_validity, "fit the H^s tail only above (ln N)^{2/kappa}");
  app.add_option("--term", cfg.term, "symbol: 1, 2, 3 or total");
  app.add_option("--mc-check", cfg.mc_check, "Monte Carlo draws for the Wick comparison");
  app.add_flag("--decay", cfg.decay, "dyadic decay curve up to N");
  app.add_option_function<double>("--x", [&](const double& v) { cfg.x = v; }, "convolution exponent x");
  app.add_option_function<double>("--y", [&](const double& v) { cfg.y = v; }, "convolution exponent y");
  app.add_option("--case", cfg.conv_case, "convolution case i, ii, iii or iv");
  app.add_option("--m-range", cfg.m_range, "largest |m|");
  app.add_option("--big-m-set", cfg.big_m, "values of M")->delimiter(',');
  app.add_option("--set", cfg.set, "set A: ball, box or full");
  app.add_option("--radius-q", cfg.radius_q, "gamma_s quantile fixing the H^{1/2} ball radius");
  app.add_option("--box-mode", cfg.box_mode, "mode of the box set");
  app.add_option("--box-lo", cfg.box_lo, "lower bound on Re c(mode) for the box set");
  app.add_option("--fixture", cfg.fixture, "flow initial datum: cos, gaussian or a field JSON file");
  app.add_option("--scale", cfg.scale, "suite: multiplies every sample count");
  app.add_option("--mutate", cfg.mutate, "suite: deliberately corrupt the decomposition (f2-sign)");
  app.add_option("--seed", cfg.seed, "master seed");
  app.add_option("--out", cfg.out_dir, "output directory (default $BBMLAB_OUT_DIR, else ./bbmlab-out)");
  app.add_option("--threads", cfg.threads, "worker thread cap");

  app.add_subcommand("sample", "draw fields from gamma_s and report their energies");
  app.add_subcommand("flow", "evolve a datum under the truncated flow");
  app.add_subcommand("fn", "evaluate F_N and its decomposition on gamma_s draws");
  app.add_subcommand("wick", "exact L^2 norm of a symbol's trilinear form");
  app.add_subcommand("convbounds", "lattice convolution sums against their envelopes");
  app.add_subcommand("tails", "survival curves and tail exponents on the energy ball");
  app.add_subcommand("lp", "L^p norms of F_N on the energy ball");
  app.add_subcommand("hyper", "L^p growth and N-decay of F_N - F_M under gamma_s");
  app.add_subcommand("cov", "change of variables for the truncated flow");
  app.add_subcommand("transport", "gamma_s mass of a set transported by the flow");
  app.add_subcommand("suite", "gate battery: fast or full")
      ->add_option("name", cfg.suite, "fast or full")
      ->check(CLI::IsMember({"fast", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  cfg.kind = app.get_subcommands().front()->get_name();
  try {
    cfg.validate();
    set_max_threads(cfg.threads);
    if (cfg.kind == "sample") return cmd_sample(cfg);
    if (cfg.kind == "flow") return cmd_flow(cfg);
    if (cfg.kind == "fn") return cmd_fn(cfg);
    if (cfg.kind == "wick") return cmd_wick(cfg);
    if (cfg.kind == "convbounds") return cmd_convbounds(cfg);
    if (cfg.kind == "tails") return cmd_tails(cfg);
    if (cfg.kind == "lp") return cmd_lp(cfg);
    if (cfg.kind == "hyper") return cmd_hyper(cfg);
    if (cfg.kind == "cov") return cmd_cov(cfg);
    if (cfg.kind == "transport") return cmd_transport(cfg);
    if (cfg.kind == "suite") return cmd_suite(cfg);
  } catch (const Error& e) {
    std::cerr << "bbmlab " << cfg.kind << ": " << e.what() << '\n';
    if (e.code() == Errc::ConfigInvalid || e.code() == Errc::InvalidArgument) {
      std::cerr << '\n' << app.get_formatter()->make_help(&app, "", CLI::AppFormatMode::Normal);
      return 2;
    }
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "bbmlab " << cfg.kind << ": " << e.what() << '\n';
    return 1;
  }
  return 2;
}
