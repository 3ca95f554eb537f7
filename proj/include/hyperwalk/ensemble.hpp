#pragma once

// Ensembles of independent trajectories.  Trajectory t draws only from the
// streams keyed by (seed, t); records come back ordered by (t, n) whatever the
// thread count.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <new>
#include <optional>
#include <thread>
#include <vector>

#include "error.hpp"
#include "geometry.hpp"
#include "walk.hpp"

namespace hyperwalk {

enum class WalkKind { U, Z };

struct EnsembleConfig {
  std::uint64_t trajectories = 1;
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  std::uint64_t record_stride = 1;
  StepLaw law;
  double p = 0.5;
  double tau0 = 0.0;
  std::optional<double> varsigma0;  // nullopt: uniform on [−π/2, π/2]
  Pole<double> pole = Pole<double>::unit();
  unsigned threads = 1;  // 0: one per hardware thread

  void validate() const {
    if (trajectories < 1) throw ConfigError("trajectories must be >= 1");
    if (record_stride < 1) throw ConfigError("record stride must be >= 1");
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p must lie in [0, 1]");
    if (!(std::abs(tau0) <= kSaturationTau)) throw ConfigError("|tau0| must be <= 30");
    if (varsigma0 && !(std::abs(*varsigma0) <= std::numbers::pi / 2)) {
      throw ConfigError("varsigma0 must lie in [-pi/2, pi/2]");
    }
  }
};

/// One recorded state.  omega is ω_n for the U-walk and ω̃_n for the Z-walk;
/// (varsigma, tau) are the bipolar coordinates of the current point.
struct TrajectoryRecord {
  std::uint64_t traj = 0;
  std::uint64_t n = 0;
  double omega = 0.0;
  double varsigma = 0.0;
  double tau = 0.0;
  double x = 0.0;
  double y = 0.0;
  bool saturated = false;
  double busemann_plus = 0.0;   // B_α
  double busemann_minus = 0.0;  // B_{−α}
  double dist_p = 0.0;          // d_p(0, ·)

  friend bool operator==(const TrajectoryRecord&, const TrajectoryRecord&) = default;
};

inline TrajectoryRecord make_record(std::uint64_t traj, std::uint64_t n, double omega,
                                    const BipolarPoint<double>& b, const Position& pos) {
  TrajectoryRecord r;
  r.traj = traj;
  r.n = n;
  r.omega = omega;
  r.varsigma = b.varsigma;
  r.tau = b.tau;
  r.x = pos.point.re();
  r.y = pos.point.im();
  r.saturated = pos.saturated;
  r.busemann_plus = busemann_bipolar(b, +1);
  r.busemann_minus = busemann_bipolar(b, -1);
  r.dist_p = origin_distance_bipolar(b);
  return r;
}

inline double initial_angle(const EnsembleConfig& cfg, TrajectoryStreams& rng) {
  return cfg.varsigma0 ? *cfg.varsigma0 : uniform_angle(rng.angles);
}

inline bool record_due(const EnsembleConfig& cfg, std::uint64_t n) {
  return n % cfg.record_stride == 0 || n == cfg.steps;
}

inline std::vector<TrajectoryRecord> run_u_trajectory(const EnsembleConfig& cfg,
                                                      std::uint64_t traj) {
  TrajectoryStreams rng(cfg.seed, traj);
  const double varsigma0 = initial_angle(cfg, rng);
  WalkState state(BipolarPoint<double>(varsigma0, cfg.tau0, cfg.pole));
  std::vector<TrajectoryRecord> out;
  out.reserve(cfg.steps / cfg.record_stride + 1);
  for (std::uint64_t k = 0; k < cfg.steps; ++k) {
    state = u_walk_step(state, sample_step(cfg.law, rng.steps).gamma);
    if (record_due(cfg, state.n)) {
      out.push_back(make_record(traj, state.n, state.omega, state.bipolar(),
                                current_position(state)));
    }
  }
  return out;
}

inline std::vector<TrajectoryRecord> run_z_trajectory(const EnsembleConfig& cfg,
                                                      std::uint64_t traj) {
  TrajectoryStreams rng(cfg.seed, traj);
  ZWalkState state;
  state.varsigma = initial_angle(cfg, rng);
  state.tau0 = cfg.tau0;
  state.p = cfg.p;
  state.pole = cfg.pole;
  std::vector<TrajectoryRecord> out;
  out.reserve(cfg.steps / cfg.record_stride + 1);
  for (std::uint64_t k = 0; k < cfg.steps; ++k) {
    state = z_walk_step(state, cfg.law, rng);
    if (record_due(cfg, state.n)) {
      out.push_back(make_record(traj, state.n, state.omega_tilde, state.bipolar(),
                                z_current_position(state)));
    }
  }
  return out;
}

inline std::vector<TrajectoryRecord> run_trajectory(const EnsembleConfig& cfg, WalkKind kind,
                                                    std::uint64_t traj) {
  return kind == WalkKind::U ? run_u_trajectory(cfg, traj) : run_z_trajectory(cfg, traj);
}

inline unsigned resolve_threads(unsigned requested, std::uint64_t jobs) {
  unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::uint64_t>(n, jobs));
}

/// Runs fn(i) for i in [0, jobs) on up to `threads` workers.  fn writes its
/// own slot, so results do not depend on scheduling.  The first exception
/// thrown by any job is rethrown after all workers have stopped.
template <class Fn>
void parallel_for(std::uint64_t jobs, unsigned threads, Fn&& fn) {
  threads = resolve_threads(threads, jobs);
  if (threads <= 1) {
    for (std::uint64_t i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= jobs || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

inline std::vector<TrajectoryRecord> run_ensemble(const EnsembleConfig& cfg, WalkKind kind) {
  cfg.validate();
  std::vector<std::vector<TrajectoryRecord>> per_traj(cfg.trajectories);
  std::vector<char> done(cfg.trajectories, 0);
  try {
    parallel_for(cfg.trajectories, cfg.threads, [&](std::uint64_t t) {
      per_traj[t] = run_trajectory(cfg, kind, t);
      done[t] = 1;
    });
  } catch (const std::bad_alloc&) {
    const auto completed = static_cast<std::size_t>(std::count(done.begin(), done.end(), 1));
    throw PartialResult("ensemble ran out of memory", completed);
  }
  std::size_t total = 0;
  for (const auto& v : per_traj) total += v.size();
  std::vector<TrajectoryRecord> out;
  try {
    out.reserve(total);
  } catch (const std::bad_alloc&) {
    throw PartialResult("ensemble ran out of memory while merging", cfg.trajectories);
  }
  for (auto& v : per_traj) out.insert(out.end(), v.begin(), v.end());
  return out;
}

}  // namespace hyperwalk
