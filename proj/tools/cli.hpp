#pragma once

// Command-line front end.  cli_main is kept separate from main() so the
// tests can drive it in-process.
//
// Exit codes: 0 success, 1 configuration or precondition error, 2 a
// verification suite reported failures.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <hyperwalk/analysis.hpp>
#include <hyperwalk/ensemble.hpp>
#include <hyperwalk/io.hpp>
#include <hyperwalk/quad.hpp>
#include <hyperwalk/verify.hpp>

namespace hyperwalk::cli {

using ojson = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitVerification = 2;

struct Options {
  std::string config;
  bool json = false;
  std::string law = "uniform";
  std::uint64_t steps = 0;
  std::uint64_t trajectories = 1;
  std::uint64_t seed = 1;  // only verify may run without --seed
  std::uint64_t stride = 1;
  std::uint64_t replicas = 5000;
  std::uint64_t trials = 1000;
  std::uint64_t grid = 100;
  std::uint64_t runs = 1;
  double p = 0.5;
  double tau0 = 0.0;
  double varsigma0 = 0.0;
  double pole_angle = 0.0;
  double delta = 0.1;
  double threshold = 0.0;
  std::vector<double> thresholds{1.0, 2.0, 3.0};
  std::string walk = "u";
  std::string normalizer = "standard";
  std::string format = "csv";
  std::string out;
  std::string in;
  unsigned threads = 0;
};

/// Prints a report as "key: value" lines; arrays of objects become tables.
inline void print_text(const ojson& j, std::ostream& out, const std::string& prefix = "") {
  for (const auto& [key, value] : j.items()) {
    if (value.is_object()) {
      print_text(value, out, prefix + key + ".");
    } else if (value.is_array() && !value.empty() && value.front().is_object()) {
      out << prefix << key << ":\n ";
      for (const auto& [k, v] : value.front().items()) out << ' ' << k;
      out << '\n';
      for (const auto& row : value) {
        out << ' ';
        for (const auto& [k, v] : row.items()) out << ' ' << (v.is_string() ? v.get<std::string>() : v.dump());
        out << '\n';
      }
    } else {
      out << prefix << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
    }
  }
}

inline void emit(const ojson& report, const Options& o, std::ostream& out) {
  if (o.json) {
    out << report.dump(2) << '\n';
  } else {
    print_text(report, out);
  }
}

/// Fills options not given on the command line from a flat JSON object whose
/// keys are flag names without the leading dashes.
inline void apply_config(CLI::App& sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  ojson j;
  try {
    j = ojson::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  auto to_string = [](const ojson& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw ConfigError("config values must be strings, numbers, booleans or arrays of those");
  };
  for (const auto& [key, value] : j.items()) {
    CLI::Option* opt = key == "config" ? nullptr : sub.get_option_no_throw("--" + key);
    if (opt == nullptr) throw ConfigError("unknown config key: " + key);
    if (opt->count() > 0) continue;  // the command line wins
    std::vector<std::string> results;
    if (value.is_array()) {
      for (const auto& v : value) results.push_back(to_string(v));
    } else {
      results.push_back(to_string(value));
    }
    try {
      opt->add_result(results);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ConfigError("config key " + key + ": " + e.what());
    }
  }
}

inline EnsembleConfig ensemble_config(const Options& o, const CLI::App& sub) {
  EnsembleConfig cfg;
  cfg.trajectories = o.trajectories;
  cfg.steps = o.steps;
  cfg.seed = o.seed;
  cfg.record_stride = o.stride;
  cfg.law = StepLaw::parse(o.law);
  cfg.p = o.p;
  cfg.tau0 = o.tau0;
  if (sub.get_option_no_throw("--varsigma0") && sub.get_option("--varsigma0")->count() > 0) {
    cfg.varsigma0 = o.varsigma0;
  }
  cfg.pole = Pole<double>::from_angle(o.pole_angle);
  cfg.threads = o.threads;
  cfg.validate();
  return cfg;
}

inline ojson moments_json(const StepLawMoments& m) {
  ojson j;
  j["mean_gamma"] = m.mean;
  j["var_gamma"] = m.variance;
  j["second_moment"] = m.second_moment;
  j["sigma"] = m.sigma();
  j["error_bound"] = m.error_bound;
  j["divergent"] = m.divergent;
  j["epsilon_x"] = m.epsilon_x();
  return j;
}

inline ojson rates_json(const RateReport& r) {
  ojson j;
  j["n"] = r.n;
  j["epsilon_x"] = r.epsilon_x;
  j["expected_rate"] = r.expected_rate;
  j["busemann_rate"] = r.busemann_rate;
  j["distance_rate"] = r.distance_rate;
  j["euclid_log_rate"] = r.euclid_log_rate;
  return j;
}

inline ojson identity_json(const IdentityReport& r) {
  ojson j;
  j["precision"] = r.precision;
  j["cases"] = r.cases;
  j["steps"] = r.steps;
  j["omega_cap"] = r.omega_cap;
  j["max_abs_omega"] = r.max_abs_omega;
  j["tolerance"] = r.tolerance;
  j["passed"] = r.passed();
  j["failed"] = r.failed();
  ojson checks = ojson::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"check", c.name}, {"passed", c.passed}, {"failed", c.failed}, {"max_error", c.max_error}});
  }
  j["checks"] = checks;
  return j;
}

inline int cmd_simulate(const Options& o, const CLI::App& sub, WalkKind kind, std::ostream& out) {
  const EnsembleConfig cfg = ensemble_config(o, sub);
  const auto records = run_ensemble(cfg, kind);
  const auto format = parse_format(o.format);
  if (o.out == "-") {
    write_trajectory(records, out, format);
    return kExitOk;
  }
  const std::size_t written = write_trajectory(records, o.out, format);
  ojson rep;
  rep["command"] = kind == WalkKind::U ? "simulate-u" : "simulate-z";
  rep["law"] = cfg.law.name();
  rep["seed"] = cfg.seed;
  rep["trajectories"] = cfg.trajectories;
  rep["steps"] = cfg.steps;
  rep["records"] = written;
  rep["out"] = o.out;
  emit(rep, o, out);
  return kExitOk;
}

inline int cmd_verify(const Options& o, std::ostream& out) {
  const auto dbl = run_identity_suite<double>(o.trials, o.seed, 10.0, "double", 200, 1e-9, o.threads);
  const auto q = run_identity_suite<quad>(o.trials, o.seed, 30.0, "binary128", 200, 1e-9, o.threads);
  ojson rep;
  rep["command"] = "verify";
  rep["seed"] = o.seed;
  rep["passed"] = dbl.passed() + q.passed();
  rep["failed"] = dbl.failed() + q.failed();
  rep["suites"] = ojson::array({identity_json(dbl), identity_json(q)});
  if (o.json) {
    out << rep.dump(2) << '\n';
  } else {
    out << "identity checks: " << rep["passed"].get<std::uint64_t>() << " passed, "
        << rep["failed"].get<std::uint64_t>() << " failed (seed " << o.seed << ")\n";
    for (const auto* s : {&dbl, &q}) {
      out << s->precision << ": " << s->cases << " cases x " << s->steps << " steps, |omega| <= "
          << s->omega_cap << ", tolerance " << s->tolerance << '\n';
      for (const auto& c : s->checks) {
        out << "  " << (c.failed == 0 ? "ok  " : "FAIL") << ' ' << c.name << ": " << c.passed
            << " passed, " << c.failed << " failed, max error " << c.max_error << '\n';
      }
    }
  }
  return dbl.all_passed() && q.all_passed() ? kExitOk : kExitVerification;
}

inline int cmd_rates(const Options& o, const CLI::App& sub, std::ostream& out) {
  EnsembleConfig cfg = ensemble_config(o, sub);
  const auto m = step_law_moments(cfg.law);
  ojson rep;
  rep["command"] = "rates";
  rep["law"] = cfg.law.name();
  rep["walk"] = o.walk;
  rep["seed"] = cfg.seed;
  rep["moments"] = moments_json(m);
  if (o.walk == "u") {
    cfg.p = 1.0;
    cfg.record_stride = cfg.steps;
    const auto recs = run_u_trajectory(cfg, 0);
    if (recs.empty()) throw PreconditionError("rates: --steps must be positive");
    rep["rates"] = rates_json(escape_rate(recs, cfg.law));
    const auto grid = escape_grid(o.delta, o.grid, cfg.pole);
    const double log_sup = log_sup_distance(grid, recs.back().omega, m.epsilon_x());
    rep["uniform"] = {{"delta", o.delta},
                      {"grid_points", grid.size()},
                      {"uniform_escape_rate", log_sup / static_cast<double>(recs.back().n)}};
  } else if (o.walk == "z") {
    rep["p"] = cfg.p;
    rep["rates"] = rates_json(z_rate_report(cfg));
  } else {
    throw ConfigError("--walk must be u or z");
  }
  emit(rep, o, out);
  return kExitOk;
}

inline int cmd_clt(const Options& o, std::ostream& out) {
  const StepLaw law = StepLaw::parse(o.law);
  const auto r = clt_report(law, o.steps, o.replicas, o.thresholds, o.seed, DiskPoint<double>(),
                            o.threads, Pole<double>::from_angle(o.pole_angle));
  ojson rep;
  rep["command"] = "clt";
  rep["law"] = law.name();
  rep["seed"] = o.seed;
  rep["n"] = r.n;
  rep["replicas"] = r.replicas;
  rep["a_n"] = r.a_n;
  rep["sigma"] = r.sigma;
  rep["sigma_hat"] = r.sigma_hat;
  rep["ks_statistic"] = r.ks_statistic;
  ojson rows = ojson::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"s", row.s},
                    {"P_plus_alpha", row.plus_prob},
                    {"P_minus_alpha", row.minus_prob},
                    {"reference", row.reference}});
  }
  rep["tails"] = rows;
  emit(rep, o, out);
  return kExitOk;
}

inline LilNormalizer parse_normalizer(const std::string& s) {
  if (s == "standard") return LilNormalizer::StandardLil;
  if (s == "paper") return LilNormalizer::PaperPhi;
  throw ConfigError("--normalizer must be standard or paper");
}

inline int cmd_lil(const Options& o, const CLI::App& sub, std::ostream& out) {
  const auto which = parse_normalizer(o.normalizer);
  LilReport r;
  double scale = 0.0;
  if (o.walk == "u") {
    r = lil_report(StepLaw::parse(o.law), o.steps, which, o.seed, DiskPoint<double>(), {},
                   Pole<double>::from_angle(o.pole_angle));
  } else if (o.walk == "z") {
    r = z_lil_report(ensemble_config(o, sub), o.steps, which);
  } else {
    throw ConfigError("--walk must be u or z");
  }
  scale = r.sigma;
  const auto& last = r.checkpoints.back();
  // φ(n) = √π · √(2n log log n), so a sup under one normalizer converts to
  // the other by the constant √π.
  const double to_paper = which == LilNormalizer::StandardLil ? 1.0 / std::sqrt(std::numbers::pi) : 1.0;
  const double to_standard = which == LilNormalizer::PaperPhi ? std::sqrt(std::numbers::pi) : 1.0;
  ojson rep;
  rep["command"] = "lil";
  rep["law"] = o.law;
  rep["walk"] = o.walk;
  rep["seed"] = o.seed;
  rep["normalizer"] = o.normalizer;
  rep["n_max"] = last.n;
  rep["checkpoints"] = r.checkpoints.size();
  rep["sigma_scale"] = scale;
  rep["sup_busemann_plus"] = last.sup_busemann_plus;
  rep["sup_busemann_minus"] = last.sup_busemann_minus;
  rep["sup_dist"] = last.sup_dist;
  rep["ratio_to_sigma"] = last.sup_dist / scale;
  rep["ratio_standard_lil"] = last.sup_dist * to_standard / scale;
  rep["ratio_paper_phi"] = last.sup_dist * to_paper / scale;
  emit(rep, o, out);
  return kExitOk;
}

inline int cmd_oscillation(const Options& o, std::ostream& out) {
  const StepLaw law = StepLaw::parse(o.law);
  ojson rep;
  rep["command"] = "oscillation";
  rep["law"] = law.name();
  rep["n"] = o.steps;
  ojson runs = ojson::array();
  std::uint64_t passed = 0;
  double threshold = o.threshold;
  for (std::uint64_t i = 0; i < o.runs; ++i) {
    const auto r = oscillation_check(law, o.steps, o.threshold, o.seed + i);
    threshold = r.threshold;
    passed += r.passed ? 1 : 0;
    runs.push_back({{"seed", o.seed + i},
                    {"max_omega", r.max_omega},
                    {"min_omega", r.min_omega},
                    {"sign_flips", r.sign_flips},
                    {"passed", r.passed}});
  }
  rep["threshold"] = threshold;
  rep["passed_runs"] = passed;
  rep["total_runs"] = o.runs;
  rep["runs"] = runs;
  emit(rep, o, out);
  return kExitOk;
}

inline int cmd_render(const Options& o, std::ostream& out) {
  if (o.in.empty() || o.out.empty()) throw ConfigError("render needs --in and --out");
  const auto records = read_trajectory(o.in);
  render_pointcloud(records, o.out, Pole<double>::from_angle(o.pole_angle));
  std::size_t saturated = 0;
  for (const auto& r : records) saturated += r.saturated ? 1 : 0;
  ojson rep;
  rep["command"] = "render";
  rep["points"] = records.size();
  rep["saturated"] = saturated;
  rep["out"] = o.out;
  emit(rep, o, out);
  return kExitOk;
}

inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  CLI::App app{"Random gyrotranslation walks on the Poincare disk"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* s) {
    s->add_option("--config", o.config, "flat JSON file of option values (flags take precedence)");
    s->add_flag("--json", o.json, "print the report as JSON");
    s->add_option("--threads", o.threads, "worker threads, 0 = all hardware threads");
  };
  auto law = [&](CLI::App* s) {
    s->add_option("--law", o.law, "uniform | paper-triangular | triangular:<mode> | table:<path>");
    s->add_option("--pole-angle", o.pole_angle, "alpha = exp(i*angle)");
  };
  auto seeded = [&](CLI::App* s) { s->add_option("--seed", o.seed, "64-bit seed (required)"); };
  auto walk_opts = [&](CLI::App* s) {
    s->add_option("--steps", o.steps, "steps per trajectory")->check(CLI::PositiveNumber);
    s->add_option("--tau0", o.tau0, "initial tau");
    s->add_option("--varsigma0", o.varsigma0, "fixed initial varsigma (default: uniform on [-pi/2, pi/2])");
    s->add_option("--p", o.p, "gyration probability of the two-pencil walk")->check(CLI::Range(0.0, 1.0));
  };

  auto* su = app.add_subcommand("simulate-u", "run an ensemble of U-walks and write trajectories");
  auto* sz = app.add_subcommand("simulate-z", "run an ensemble of two-pencil walks and write trajectories");
  for (auto* s : {su, sz}) {
    common(s);
    law(s);
    seeded(s);
    walk_opts(s);
    s->add_option("--trajectories", o.trajectories, "number of trajectories")->check(CLI::PositiveNumber);
    s->add_option("--stride", o.stride, "record every stride steps")->check(CLI::PositiveNumber);
    s->add_option("--out", o.out, "output path, - for stdout");
    s->add_option("--format", o.format, "csv | jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
  }

  auto* verify = app.add_subcommand("verify", "run the exact-identity suites");
  common(verify);
  verify->add_option("--trials", o.trials, "random cases per precision")->check(CLI::PositiveNumber);
  verify->add_option("--seed", o.seed, "seed for the random cases (default 1)");

  auto* rates = app.add_subcommand("rates", "escape rates of a drifting walk");
  common(rates);
  law(rates);
  seeded(rates);
  walk_opts(rates);
  rates->add_option("--walk", o.walk, "u | z")->check(CLI::IsMember({"u", "z"}));
  rates->add_option("--delta", o.delta, "radius of the excluded pole neighbourhoods");
  rates->add_option("--grid", o.grid, "minimum grid size for the uniform rate");

  auto* clt = app.add_subcommand("clt", "central limit check of a mean-zero walk");
  common(clt);
  law(clt);
  seeded(clt);
  clt->add_option("--steps", o.steps, "walk length n")->check(CLI::PositiveNumber);
  clt->add_option("--replicas", o.replicas, "independent walks")->check(CLI::PositiveNumber);
  clt->add_option("--thresholds", o.thresholds, "tail thresholds s > 0")->delimiter(',');

  auto* lil = app.add_subcommand("lil", "iterated-logarithm statistics of a mean-zero walk");
  common(lil);
  law(lil);
  seeded(lil);
  walk_opts(lil);
  lil->add_option("--walk", o.walk, "u | z")->check(CLI::IsMember({"u", "z"}));
  lil->add_option("--normalizer", o.normalizer, "standard | paper")->check(CLI::IsMember({"standard", "paper"}));

  auto* osc = app.add_subcommand("oscillation", "range of a mean-zero walk");
  common(osc);
  law(osc);
  seeded(osc);
  osc->add_option("--steps", o.steps, "walk length n")->check(CLI::PositiveNumber);
  osc->add_option("--threshold", o.threshold, "pass threshold, 0 = 0.2*sigma*sqrt(n)");
  osc->add_option("--runs", o.runs, "runs with seeds seed, seed+1, ...")->check(CLI::PositiveNumber);

  auto* render = app.add_subcommand("render", "draw a trajectory file as an SVG point cloud");
  common(render);
  render->add_option("--in", o.in, "trajectory file (csv or jsonl)");
  render->add_option("--out", o.out, "SVG path");
  render->add_option("--pole-angle", o.pole_angle, "alpha = exp(i*angle)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    if (!o.config.empty()) apply_config(*sub, o.config);
    const std::string name = sub->get_name();
    if (sub != verify && sub != render && sub->get_option("--seed")->count() == 0) {
      throw ConfigError("--seed is required for " + name);
    }
    if (sub == su || sub == sz) {
      if (o.out.empty()) throw ConfigError(name + " needs --out");
      if (o.steps == 0) throw ConfigError(name + " needs --steps");
      return cmd_simulate(o, *sub, sub == su ? WalkKind::U : WalkKind::Z, out);
    }
    if (sub == verify) return cmd_verify(o, out);
    if (o.steps == 0 && sub != render) throw ConfigError(name + " needs --steps");
    if (sub == rates) return cmd_rates(o, *sub, out);
    if (sub == clt) return cmd_clt(o, out);
    if (sub == lil) return cmd_lil(o, *sub, out);
    if (sub == osc) return cmd_oscillation(o, out);
    return cmd_render(o, out);
  } catch (const NotApplicable& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const PartialResult& e) {
    err << "error: " << e.what() << " (" << e.completed() << " completed)\n";
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace hyperwalk::cli
