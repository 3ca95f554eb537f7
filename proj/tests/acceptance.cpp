// Acceptance run: one PASS/FAIL line per criterion with the measured values,
// the pinned tolerances and the wall time against its limit.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <hyperwalk/analysis.hpp>
#include <hyperwalk/io.hpp>
#include <hyperwalk/quad.hpp>
#include <hyperwalk/verify.hpp>

using namespace hyperwalk;

namespace {

struct Outcome {
  bool ok;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome r{false, ""};
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < limit_s;
  const bool pass = r.ok && in_time;
  if (!pass) ++failures;
  std::printf("criterion %d: %s  %s | %s | runtime %.2f s (limit %.0f s%s)\n", id, pass ? "PASS" : "FAIL",
              title, r.detail.c_str(), secs, limit_s, in_time ? "" : ", EXCEEDED");
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool within(double v, double target, double tol) { return std::abs(v - target) <= tol; }

constexpr double kPaperMean = 0.0781;
constexpr std::uint64_t kRateSeed = 3;
constexpr std::uint64_t kRateSteps = 100000;

EnsembleConfig rate_config(double p) {
  EnsembleConfig cfg;
  cfg.steps = kRateSteps;
  cfg.record_stride = kRateSteps;
  cfg.seed = kRateSeed;
  cfg.law = StepLaw::paper_triangular();
  cfg.p = p;
  cfg.varsigma0 = 0.0;  // z0 = 0
  cfg.tau0 = 0.0;
  return cfg;
}

double near_fraction(std::span<const TrajectoryRecord> recs, const std::complex<double>& target) {
  std::size_t hits = 0;
  for (const auto& r : recs) hits += std::abs(std::complex<double>(r.x, r.y) - target) < 0.15;
  return recs.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(recs.size());
}

std::string to_csv(std::span<const TrajectoryRecord> recs) {
  std::ostringstream os;
  write_trajectory(recs, os, TrajectoryFormat::csv);
  return os.str();
}

}  // namespace

int main() {
  criterion(1, "exact identities, 1000 cases x 200 steps per precision, tol 1e-9", 10.0, [] {
    const auto d = run_identity_suite<double>(1000, 1, 10.0, "double");
    const auto q = run_identity_suite<quad>(1000, 1, 30.0, "binary128");
    std::string worst;
    double worst_err = 0.0;
    for (const auto* rep : {&d, &q}) {
      for (const auto& c : rep->checks) {
        if (c.max_error >= worst_err) {
          worst_err = c.max_error;
          worst = rep->precision + " " + c.name;
        }
      }
    }
    return Outcome{d.all_passed() && q.all_passed(),
                   fmt("double |w|<=%.0f: %llu passed %llu failed; binary128 |w|<=%.1f: %llu passed "
                       "%llu failed; worst %.2e (%s)",
                       d.max_abs_omega, (unsigned long long)d.passed(), (unsigned long long)d.failed(),
                       q.max_abs_omega, (unsigned long long)q.passed(), (unsigned long long)q.failed(),
                       worst_err, worst.c_str())};
  });

  criterion(2, "quadrature anchor", 1.0, [] {
    const auto t = step_law_moments(StepLaw::paper_triangular());
    const auto u = step_law_moments(StepLaw::uniform());
    const double pi2_3 = std::numbers::pi * std::numbers::pi / 3.0;
    const bool ok_t = within(t.mean, kPaperMean, 5e-4);
    const bool ok_u = within(u.mean, 0.0, 1e-8) && within(u.variance, pi2_3, 1e-6);
    return Outcome{ok_t && ok_u,
                   fmt("paper-triangular mean %.6f (target 0.0781 +- 0.0005, off by %.6f); uniform "
                       "mean %.1e var %.9f (target 0 +- 1e-8, %.9f +- 1e-6)",
                       t.mean, t.mean - kPaperMean, u.mean, u.variance, pi2_3)};
  });

  RateReport u_rates;
  criterion(3, "escape rates, paper-triangular, n=1e5", 5.0, [&] {
    const auto cfg = rate_config(1.0);
    const auto recs = run_ensemble(cfg, WalkKind::U);
    u_rates = escape_rate(recs, cfg.law);
    const double uni = uniform_escape_rate(cfg.law, 0.1, 100, kRateSteps, kRateSeed);
    const bool ok = within(u_rates.distance_rate, kPaperMean, 0.01) &&
                    within(u_rates.euclid_log_rate, -kPaperMean, 0.01) && within(uni, -kPaperMean, 0.01);
    return Outcome{ok, fmt("distance %.5f, euclid_log %.5f, uniform(delta=0.1, grid>=100) %.5f "
                           "(targets +-0.0781 +- 0.01)",
                           u_rates.distance_rate, u_rates.euclid_log_rate, uni)};
  });

  criterion(4, "two-pencil escape rate, paper-triangular, n=1e5", 5.0, [&] {
    auto cfg = rate_config(0.5);
    cfg.varsigma0.reset();  // ς₀ uniform
    const auto half = z_rate_report(cfg);
    const auto one = z_rate_report(rate_config(1.0));
    const bool same = one.distance_rate == u_rates.distance_rate &&
                      one.busemann_rate == u_rates.busemann_rate &&
                      one.euclid_log_rate == u_rates.euclid_log_rate;
    return Outcome{within(half.distance_rate, 0.03905, 0.01) && same,
                   fmt("p=0.5 distance %.5f (target 0.03905 +- 0.01); p=1 distance %.17g vs U-walk "
                       "%.17g: %s",
                       half.distance_rate, one.distance_rate, u_rates.distance_rate,
                       same ? "bit-identical" : "DIFFERENT")};
  });

  criterion(5, "CLT, uniform, n=1000, 5000 replicas", 30.0, [] {
    const std::vector<double> s = {1.0, 2.0, 3.0};
    const auto rep = clt_report(StepLaw::uniform(), 1000, 5000, s, 1);
    bool ok = rep.ks_statistic < 0.02;
    std::string tails;
    for (const auto& row : rep.rows) {
      ok = ok && within(row.plus_prob, row.reference, 0.02) && within(row.minus_prob, row.reference, 0.02);
      tails += fmt(" s=%.0f: %.4f/%.4f vs %.4f;", row.s, row.plus_prob, row.minus_prob, row.reference);
    }
    return Outcome{ok, fmt("KS %.4f (< 0.02); tails +alpha/-alpha vs Phi(-s/sigma) +- 0.02:", rep.ks_statistic) +
                           tails};
  });

  criterion(6, "oscillation, uniform, n=1e5, seeds 1..20, threshold 50", 10.0, [] {
    int passed = 0;
    std::string failed_seeds;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto r = oscillation_check(StepLaw::uniform(), 100000, 50.0, seed);
      if (r.passed) {
        ++passed;
      } else {
        failed_seeds += fmt(" %llu(max %.1f, min %.1f)", (unsigned long long)seed, r.max_omega, r.min_omega);
      }
    }
    return Outcome{passed >= 19, fmt("%d/20 runs oscillate past +-50 (need >= 19)", passed) +
                                     (failed_seeds.empty() ? "" : "; misses:" + failed_seeds)};
  });

  criterion(7, "LIL, uniform, n=1e7, standard normalizer, z0=0.3+0.4i", 60.0, [] {
    const DiskPoint<double> z0(0.3, 0.4);
    const double d0 = poincare_distance(DiskPoint<double>(), z0);
    const auto rep = lil_report(StepLaw::uniform(), 10000000, LilNormalizer::StandardLil, 1, z0);
    std::size_t bad = 0;
    double worst = 0.0;
    for (const auto& c : rep.checkpoints) {
      const double bp = std::abs(c.busemann_plus), bm = std::abs(c.busemann_minus);
      const double gap = std::max({std::abs(bp - bm), std::abs(bp - c.dist_p), std::abs(bm - c.dist_p)});
      worst = std::max(worst, gap / (2 * d0));
      bad += gap / c.norm > 2 * d0 / c.norm + 1e-12;
    }
    const double ratio = rep.final_ratio();
    return Outcome{ratio >= 0.6 && ratio <= 1.3 && bad == 0,
                   fmt("sup d_p/norm / sigma = %.4f (band [0.6, 1.3]); pairwise gaps within 2 d_p(0,z0) at "
                       "%zu/%zu checkpoints (worst gap %.3f of the bound)",
                       ratio, rep.checkpoints.size() - bad, rep.checkpoints.size(), worst)};
  });

  criterion(8, "point clouds, n=300000", 20.0, [] {
    EnsembleConfig cfg;
    cfg.steps = 300000;
    cfg.seed = 1;
    cfg.law = StepLaw::uniform();
    cfg.p = 0.5;
    const auto uni = run_ensemble(cfg, WalkKind::Z);
    const std::span<const TrajectoryRecord> late(uni.begin() + uni.size() / 10, uni.end());
    const double polar = near_fraction(late, 1.0) + near_fraction(late, -1.0);

    cfg.law = StepLaw::paper_triangular();
    cfg.p = 0.9;
    const auto tri = run_ensemble(cfg, WalkKind::Z);
    const std::span<const TrajectoryRecord> last(tri.end() - tri.size() / 10, tri.end());
    const double plus = near_fraction(last, 1.0), minus = near_fraction(last, -1.0);
    const bool asym = plus >= 5.0 * minus && plus > 0.0;

    const auto svg_uni = render_svg(uni);
    const auto svg_tri = render_svg(tri);
    cfg.law = StepLaw::uniform();
    cfg.p = 0.5;
    const bool deterministic = render_svg(run_ensemble(cfg, WalkKind::Z)) == svg_uni;
    std::ofstream("figure_uniform_p05.svg", std::ios::binary) << svg_uni;
    std::ofstream("figure_triangular_p09.svg", std::ios::binary) << svg_tri;
    return Outcome{polar >= 0.6 && asym && deterministic,
                   fmt("uniform p=0.5: %.1f%% of late points within 0.15 of the poles (need >= 60%%); "
                       "triangular p=0.9 last 10%%: %.1f%% near alpha vs %.1f%% near -alpha (need >= 5x); "
                       "SVG rerun %s",
                       100 * polar, 100 * plus, 100 * minus, deterministic ? "byte-identical" : "DIFFERS")};
  });

  criterion(9, "serial vs parallel ensembles, byte-identical CSV", 10.0, [] {
    EnsembleConfig cfg;
    cfg.trajectories = 16;
    cfg.steps = 20000;
    cfg.record_stride = 10;
    cfg.seed = 9;
    cfg.law = StepLaw::paper_triangular();
    std::string detail;
    bool ok = true;
    const unsigned hw = resolve_threads(0, cfg.trajectories);
    std::size_t bytes = 0;
    for (auto kind : {WalkKind::U, WalkKind::Z}) {
      cfg.threads = 1;
      const auto serial = to_csv(run_ensemble(cfg, kind));
      bytes = serial.size();
      for (unsigned t : {0u, 16u}) {
        cfg.threads = t;
        const bool same = to_csv(run_ensemble(cfg, kind)) == serial;
        ok = ok && same;
        detail += fmt("%s threads=%u%s: %s; ", kind == WalkKind::U ? "U" : "Z", t == 0 ? hw : t,
                      t == 0 ? " (max)" : "", same ? "identical" : "DIFFERENT");
      }
    }
    return Outcome{ok, detail + fmt("%zu-byte files", bytes)};
  });

  std::printf("acceptance: %d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
