#pragma once

// Estimators for the long-run behaviour of the walks.  Every statistic is
// evaluated from τ-domain quantities (ω_n, ς, τ), so nothing here depends on
// Cartesian coordinates that have collapsed onto a pole.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <type_traits>
#include <variant>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "ensemble.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "step_law.hpp"
#include "walk.hpp"

namespace hyperwalk {

// ---------------------------------------------------------------------------
// Moments of γ under a step law

struct StepLawMoments {
  double mean = 0.0;           // E(γ₁)
  double second_moment = 0.0;  // E(γ₁²)
  double variance = 0.0;
  double error_bound = 0.0;    // summed quadrature error estimates
  bool divergent = false;

  /// σ = (E γ₁²)^{1/2}.
  double sigma() const { return std::sqrt(second_moment); }

  /// sign(E γ₁), with |mean| inside the quadrature noise counted as zero.
  int epsilon_x() const {
    const double floor = std::max(10.0 * error_bound, 1e-9);
    if (std::abs(mean) <= floor) return 0;
    return mean > 0 ? 1 : -1;
  }
};

namespace detail {

struct QuadResult {
  double first = 0.0;
  double second = 0.0;
  double error = 0.0;
};

/// ∫_a^b γ(x)^k w(x) dx for k = 1, 2 on a sub-interval of [−1, 1].  The
/// complement argument of tanh-sinh keeps 1±x accurate next to ±1, where γ
/// has its logarithmic singularities.
template <class Weight>
QuadResult integrate_gamma_moments(double a, double b, Weight weight) {
  // The (x, xc) overload of integrate() is not const in Boost 1.74.
  thread_local boost::math::quadrature::tanh_sinh<double> ts;
  // γ(x)^k w(x), with 1 + x = −xc next to a = −1 and 1 − x = xc next to b = 1.
  auto integrand = [a, b, &weight](int power) {
    return [a, b, &weight, power](double x, double xc) -> double {
      const double one_plus = (xc < 0 && a == -1.0) ? -xc : 1.0 + x;
      const double one_minus = (xc > 0 && b == 1.0) ? xc : 1.0 - x;
      const double g = std::log(one_plus) - std::log(one_minus);
      return (power == 1 ? g : g * g) * weight(one_plus, one_minus);
    };
  };
  QuadResult r;
  double err1 = 0, err2 = 0;
  r.first = ts.integrate(integrand(1), a, b, 1e-12, &err1);
  r.second = ts.integrate(integrand(2), a, b, 1e-12, &err2);
  r.error = err1 + err2;
  return r;
}

}  // namespace detail

/// E(γ₁) and E(γ₁²) by adaptive tanh-sinh quadrature over (−1, 1).
inline StepLawMoments step_law_moments(const StepLaw& law) {
  std::vector<detail::QuadResult> parts;
  std::visit(
      [&](const auto& l) {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, UniformX>) {
          auto w = [](double, double) { return 0.5; };
          parts.push_back(detail::integrate_gamma_moments(-1.0, 0.0, w));
          parts.push_back(detail::integrate_gamma_moments(0.0, 1.0, w));
        } else if constexpr (std::is_same_v<L, Triangular>) {
          const double m = l.mode;
          parts.push_back(detail::integrate_gamma_moments(
              -1.0, m, [m](double op, double) { return op / (1.0 + m); }));
          parts.push_back(detail::integrate_gamma_moments(
              m, 1.0, [m](double, double om) { return om / (1.0 - m); }));
        } else {
          // Quantile segments: a flat run is a point mass of weight Δu, a
          // rising run is uniform on [x0, x1] with total weight Δu.
          for (std::size_t i = 0; i + 1 < l.knots.size(); ++i) {
            const auto [u0, x0] = l.knots[i];
            const auto [u1, x1] = l.knots[i + 1];
            const double du = u1 - u0;
            if (x1 == x0) {
              const double g = gamma_of_x(x0);
              parts.push_back({g * du, g * g * du, 0.0});
            } else {
              const double dens = du / (x1 - x0);
              parts.push_back(detail::integrate_gamma_moments(
                  x0, x1, [dens](double, double) { return dens; }));
            }
          }
        }
      },
      law.variant());
  StepLawMoments m;
  for (const auto& p : parts) {
    m.mean += p.first;
    m.second_moment += p.second;
    m.error_bound += p.error;
  }
  m.variance = m.second_moment - m.mean * m.mean;
  m.divergent = !std::isfinite(m.mean) || !std::isfinite(m.second_moment);
  return m;
}

// ---------------------------------------------------------------------------
// Escape rates

struct RateReport {
  std::uint64_t n = 0;
  double busemann_rate = 0.0;    // (1/n) B_{εα}
  double distance_rate = 0.0;    // (1/n) d_p(0, ·)
  double euclid_log_rate = 0.0;  // (1/n) log|· − εα|
  int epsilon_x = 0;
  double expected_rate = 0.0;    // |E γ₁| times the gyration probability
};

inline constexpr std::uint64_t kMinRateSteps = 10'000;

inline RateReport rates_from_record(const TrajectoryRecord& rec, const StepLawMoments& m,
                                    double multiplier) {
  const int eps = m.epsilon_x();
  if (eps == 0) {
    throw NotApplicable("escape rates need E(gamma) != 0; use oscillation_check instead");
  }
  if (rec.n < kMinRateSteps) throw PreconditionError("escape rates need n >= 10^4 steps");
  const BipolarPoint<double> b(rec.varsigma, rec.tau);
  const double n = static_cast<double>(rec.n);
  RateReport r;
  r.n = rec.n;
  r.epsilon_x = eps;
  r.busemann_rate = (eps > 0 ? rec.busemann_plus : rec.busemann_minus) / n;
  r.distance_rate = rec.dist_p / n;
  r.euclid_log_rate = log_distance_to_pole(b, eps) / n;
  r.expected_rate = multiplier * std::abs(m.mean);
  return r;
}

/// Rates from the final record of a U-walk trajectory.
inline RateReport escape_rate(std::span<const TrajectoryRecord> records, const StepLaw& law) {
  if (records.empty()) throw PreconditionError("escape_rate: no records");
  return rates_from_record(records.back(), step_law_moments(law), 1.0);
}

/// Grid over D̄_δ: the closed disk minus the open δ-balls around ±α.  Rings
/// of radius j/R carry 6j points each; R grows until at least min_points
/// survive the exclusion.
inline std::vector<BipolarPoint<double>> escape_grid(double delta, std::size_t min_points,
                                                     const Pole<double>& pole = Pole<double>::unit()) {
  if (!(delta > 0.0 && delta < 1.0)) throw PreconditionError("delta must lie in (0, 1)");
  for (std::size_t rings = 2;; rings *= 2) {
    std::vector<BipolarPoint<double>> grid;
    for (std::size_t j = 0; j <= rings; ++j) {
      const double r = static_cast<double>(j) / static_cast<double>(rings);
      const std::size_t count = j == 0 ? 1 : 6 * j;
      for (std::size_t k = 0; k < count; ++k) {
        const double theta = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.5) /
                             static_cast<double>(count);
        const std::complex<double> z = std::polar(std::min(r, 1.0), theta);
        if (std::abs(z - pole.value()) < delta || std::abs(z + pole.value()) < delta) continue;
        grid.push_back(to_bipolar(DiskPoint<double>(z), pole));
      }
    }
    if (grid.size() >= min_points) return grid;
  }
}

/// log sup_{z ∈ grid} |U(z) − εα| where U shifts τ by omega.
inline double log_sup_distance(std::span<const BipolarPoint<double>> grid, double omega,
                               int epsilon) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& b : grid) {
    const BipolarPoint<double> moved(b.varsigma, b.tau + omega, b.pole);
    best = std::max(best, log_distance_to_pole(moved, epsilon));
  }
  return best;
}

inline double final_omega(const StepLaw& law, std::uint64_t n, std::uint64_t seed,
                          std::uint64_t traj = 0) {
  PhiloxStream rng(seed, traj, Substream::steps);
  double omega = 0.0;
  for (std::uint64_t k = 0; k < n; ++k) omega += sample_step(law, rng).gamma;
  return omega;
}

/// (1/n) log sup_{z ∈ D̄_δ} |U_n(z) − ε_x α| over a grid sharing one ω-path.
inline double uniform_escape_rate(const StepLaw& law, double delta, std::size_t grid_points,
                                  std::uint64_t n, std::uint64_t seed,
                                  const Pole<double>& pole = Pole<double>::unit()) {
  const auto m = step_law_moments(law);
  const int eps = m.epsilon_x();
  if (eps == 0) throw NotApplicable("uniform_escape_rate needs E(gamma) != 0");
  if (n < kMinRateSteps) throw PreconditionError("uniform_escape_rate needs n >= 10^4 steps");
  const auto grid = escape_grid(delta, grid_points, pole);
  return log_sup_distance(grid, final_omega(law, n, seed), eps) / static_cast<double>(n);
}

/// Distances to εα after a τ-shift of omega, for the three starting points of
/// the pencil sandwich: z₋ = (0, τ₀), z = (ς, τ₀), z₊ = (π/2, τ₀).
struct SandwichLogs {
  double lower;
  double middle;
  double upper;
};

inline SandwichLogs pencil_sandwich(double varsigma, double tau0, double omega, int epsilon) {
  auto at = [&](double s) { return log_distance_to_pole(BipolarPoint<double>(s, tau0 + omega), epsilon); };
  return {at(0.0), at(varsigma), at(std::numbers::pi / 2)};
}

// ---------------------------------------------------------------------------
// Distributional limits

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Two-sided Kolmogorov–Smirnov distance between a sample and a CDF.
template <class Cdf>
double ks_statistic(std::vector<double> sample, Cdf cdf) {
  if (sample.empty()) return 0.0;
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return std::min(d, 1.0);
}

/// log|U_n(z) − εα| from the factorization
///   U_n(z) − εα = (z − εα)(1 − εy_n)/(1 + y_n ᾱ z),   y_n = tanh(ω_n/2),
/// with log(1 ∓ y_n) = log 2 − softplus(±ω_n).
inline double log_distance_factorized(const DiskPoint<double>& z, double omega, int epsilon,
                                      const Pole<double>& pole = Pole<double>::unit()) {
  const auto& a = pole.value();
  const double y = std::tanh(omega / 2.0);
  const double log_gap = std::numbers::ln2 - softplus(epsilon > 0 ? omega : -omega);
  const double num = std::log(std::abs(z.value() - pole.signed_value(epsilon)));
  const double den = std::log(std::abs(1.0 + y * std::conj(a) * z.value()));
  return num + log_gap - den;
}

struct CltRow {
  double s = 0.0;
  double plus_prob = 0.0;   // P((1/a_n) log|U_n + α| < −s)
  double minus_prob = 0.0;  // P((1/a_n) log|U_n − α| < −s)
  double reference = 0.0;   // F_W(−s) = 1 − F_W(s) = Φ(−s/σ)
};

struct CltReport {
  std::uint64_t n = 0;
  std::uint64_t replicas = 0;
  double a_n = 0.0;
  double sigma = 0.0;      // from quadrature
  double sigma_hat = 0.0;  // sample standard deviation of ω_n / a_n
  double ks_statistic = 0.0;
  std::vector<CltRow> rows;
};

inline CltReport clt_report(const StepLaw& law, std::uint64_t n, std::uint64_t replicas,
                            std::span<const double> thresholds, std::uint64_t seed,
                            const DiskPoint<double>& z0 = {}, unsigned threads = 1,
                            const Pole<double>& pole = Pole<double>::unit()) {
  if (n < 1 || replicas < 2) throw PreconditionError("clt_report needs n >= 1 and replicas >= 2");
  const auto m = step_law_moments(law);
  const double sigma = m.sigma();
  if (!(sigma > 0.0) || m.divergent) throw PreconditionError("clt_report needs 0 < Var(gamma) < inf");
  const double guard = 3.0 * sigma / std::sqrt(static_cast<double>(n) * static_cast<double>(replicas));
  if (!(std::abs(m.mean) < guard)) throw PreconditionError("clt_report needs a mean-zero law");

  std::vector<double> omega(replicas);
  parallel_for(replicas, threads, [&](std::uint64_t r) { omega[r] = final_omega(law, n, seed, r); });

  CltReport rep;
  rep.n = n;
  rep.replicas = replicas;
  rep.a_n = std::sqrt(static_cast<double>(n));
  rep.sigma = sigma;
  std::vector<double> scaled(replicas);
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t r = 0; r < replicas; ++r) {
    scaled[r] = omega[r] / rep.a_n;
    sum += scaled[r];
    sum2 += scaled[r] * scaled[r];
  }
  const double k = static_cast<double>(replicas);
  rep.sigma_hat = std::sqrt(std::max(0.0, (sum2 - sum * sum / k) / (k - 1.0)));
  rep.ks_statistic = ks_statistic(scaled, [sigma](double x) { return normal_cdf(x / sigma); });

  for (const double s : thresholds) {
    if (!(s > 0.0)) throw PreconditionError("clt thresholds must be positive");
    std::size_t plus = 0, minus = 0;
    for (const double w : omega) {
      if (log_distance_factorized(z0, w, -1, pole) / rep.a_n < -s) ++plus;
      if (log_distance_factorized(z0, w, +1, pole) / rep.a_n < -s) ++minus;
    }
    rep.rows.push_back({s, static_cast<double>(plus) / k, static_cast<double>(minus) / k,
                        normal_cdf(-s / sigma)});
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Oscillation

struct OscillationReport {
  std::uint64_t n = 0;
  double max_omega = 0.0;  // max over 0 <= k <= n of τ(U_k(z)) − τ(z)
  double min_omega = 0.0;
  std::uint64_t sign_flips = 0;
  double threshold = 0.0;
  bool passed = false;  // max > threshold and min < −threshold
};

inline double default_oscillation_threshold(double sigma, std::uint64_t n) {
  return 0.2 * sigma * std::sqrt(static_cast<double>(n));
}

template <class GammaSource>
OscillationReport track_oscillation(GammaSource&& next_gamma, std::uint64_t n, double threshold) {
  OscillationReport r;
  r.n = n;
  r.threshold = threshold;
  double omega = 0.0;
  int last_sign = 0;
  for (std::uint64_t k = 0; k < n; ++k) {
    omega += next_gamma();
    r.max_omega = std::max(r.max_omega, omega);
    r.min_omega = std::min(r.min_omega, omega);
    const int sign = omega > 0 ? 1 : (omega < 0 ? -1 : 0);
    if (sign != 0) {
      if (last_sign != 0 && sign != last_sign) ++r.sign_flips;
      last_sign = sign;
    }
  }
  r.passed = r.max_omega > threshold && r.min_omega < -threshold;
  return r;
}

/// threshold <= 0 selects default_oscillation_threshold.
inline OscillationReport oscillation_check(const StepLaw& law, std::uint64_t n, double threshold,
                                           std::uint64_t seed, std::uint64_t traj = 0) {
  const auto m = step_law_moments(law);
  if (m.epsilon_x() != 0) throw NotApplicable("oscillation_check needs E(gamma) = 0");
  if (threshold <= 0.0) threshold = default_oscillation_threshold(m.sigma(), n);
  PhiloxStream rng(seed, traj, Substream::steps);
  return track_oscillation([&] { return sample_step(law, rng).gamma; }, n, threshold);
}

// ---------------------------------------------------------------------------
// Law of the iterated logarithm

enum class LilNormalizer { StandardLil, PaperPhi };

/// √(2 n log log n), or √(2π n log log n) for PaperPhi.
inline double lil_norm(std::uint64_t n, LilNormalizer which) {
  const double x = static_cast<double>(n);
  const double base = 2.0 * x * std::log(std::log(x));
  return std::sqrt(which == LilNormalizer::PaperPhi ? std::numbers::pi * base : base);
}

struct LilCheckpoint {
  std::uint64_t n = 0;
  double norm = 0.0;
  double busemann_plus = 0.0;   // B_α(U_n(z))
  double busemann_minus = 0.0;  // B_{−α}(U_n(z))
  double dist_p = 0.0;          // d_p(0, U_n(z))
  double sup_busemann_plus = 0.0;  // running sups over checkpoints of stat / norm
  double sup_busemann_minus = 0.0;
  double sup_dist = 0.0;
};

struct LilReport {
  LilNormalizer normalizer = LilNormalizer::StandardLil;
  double sigma = 0.0;
  std::vector<LilCheckpoint> checkpoints;

  /// Final running sup of d_p / norm, relative to σ.
  double final_ratio() const {
    return checkpoints.empty() ? 0.0 : checkpoints.back().sup_dist / sigma;
  }
};

struct LilSchedule {
  std::uint64_t first = 1000;
  double growth = 1.01;
};

/// Geometric checkpoints first, ⌈first·g⌉, ... up to and including n_max.
inline std::vector<std::uint64_t> lil_checkpoints(std::uint64_t n_max, LilSchedule sched = {}) {
  std::vector<std::uint64_t> cps;
  for (std::uint64_t n = std::max<std::uint64_t>(sched.first, 16); n < n_max;) {
    cps.push_back(n);
    n = std::max(n + 1, static_cast<std::uint64_t>(std::ceil(static_cast<double>(n) * sched.growth)));
  }
  cps.push_back(n_max);
  return cps;
}

/// advance(n) moves the walk to step n and returns its bipolar coordinates.
template <class Advance>
LilReport lil_track(Advance&& advance, std::uint64_t n_max, LilNormalizer normalizer, double sigma,
                    LilSchedule sched = {}) {
  LilReport rep;
  rep.normalizer = normalizer;
  rep.sigma = sigma;
  double sup_p = -std::numeric_limits<double>::infinity();
  double sup_m = sup_p, sup_d = sup_p;
  for (const std::uint64_t n : lil_checkpoints(n_max, sched)) {
    const BipolarPoint<double> b = advance(n);
    LilCheckpoint c;
    c.n = n;
    c.norm = lil_norm(n, normalizer);
    c.busemann_plus = busemann_bipolar(b, +1);
    c.busemann_minus = busemann_bipolar(b, -1);
    c.dist_p = origin_distance_bipolar(b);
    sup_p = std::max(sup_p, c.busemann_plus / c.norm);
    sup_m = std::max(sup_m, c.busemann_minus / c.norm);
    sup_d = std::max(sup_d, c.dist_p / c.norm);
    c.sup_busemann_plus = sup_p;
    c.sup_busemann_minus = sup_m;
    c.sup_dist = sup_d;
    rep.checkpoints.push_back(c);
  }
  return rep;
}

inline LilReport lil_report(const StepLaw& law, std::uint64_t n_max, LilNormalizer normalizer,
                            std::uint64_t seed, const DiskPoint<double>& z0 = {},
                            LilSchedule sched = {}, const Pole<double>& pole = Pole<double>::unit()) {
  const auto m = step_law_moments(law);
  if (m.epsilon_x() != 0) throw PreconditionError("lil_report needs a mean-zero law");
  if (n_max < kMinRateSteps) throw PreconditionError("lil_report needs n_max >= 10^4");
  PhiloxStream rng(seed, 0, Substream::steps);
  WalkState state(z0, pole);
  auto advance = [&](std::uint64_t n) {
    while (state.n < n) state = u_walk_step(state, sample_step(law, rng).gamma);
    return state.bipolar();
  };
  return lil_track(advance, n_max, normalizer, m.sigma(), sched);
}

// ---------------------------------------------------------------------------
// Two-pencil walk

/// Escape rates of the Z-walk from trajectory 0 of cfg after cfg.steps steps;
/// expected rate p·|E γ₁|.
inline RateReport z_rate_report(EnsembleConfig cfg) {
  cfg.validate();
  cfg.record_stride = std::max<std::uint64_t>(cfg.steps, 1);
  const auto recs = run_z_trajectory(cfg, 0);
  if (recs.empty()) throw PreconditionError("z_rate_report: zero steps");
  return rates_from_record(recs.back(), step_law_moments(cfg.law), cfg.p);
}

/// LIL statistics of the Z-walk (trajectory 0 of cfg); the limsup scale is σ√p.
inline LilReport z_lil_report(EnsembleConfig cfg, std::uint64_t n_max, LilNormalizer normalizer,
                              LilSchedule sched = {}) {
  cfg.validate();
  const auto m = step_law_moments(cfg.law);
  if (m.epsilon_x() != 0) throw PreconditionError("z_lil_report needs a mean-zero law");
  if (n_max < kMinRateSteps) throw PreconditionError("z_lil_report needs n_max >= 10^4");
  TrajectoryStreams rng(cfg.seed, 0);
  ZWalkState state;
  state.varsigma = initial_angle(cfg, rng);
  state.tau0 = cfg.tau0;
  state.p = cfg.p;
  state.pole = cfg.pole;
  auto advance = [&](std::uint64_t n) {
    while (state.n < n) state = z_walk_step(state, cfg.law, rng);
    return state.bipolar();
  };
  return lil_track(advance, n_max, normalizer, m.sigma() * std::sqrt(cfg.p), sched);
}

}  // namespace hyperwalk
