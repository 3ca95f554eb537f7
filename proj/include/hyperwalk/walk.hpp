#pragma once

// The two random motions.
//
//  U-walk: U_n(z) = g_{ω_n}(z), ω_n = γ_1 + ... + γ_n.  Only ω_n is stored;
//  positions are materialized on demand.
//
//  Z-walk: each step flips a coin c_n ~ Bernoulli(p).  On c_n = 1 the point
//  moves along its orbit circle (τ += γ), on c_n = 0 it jumps to a fresh
//  circle of the pencil (ς redrawn uniformly on [−π/2, π/2]).

#include <cmath>
#include <cstdint>
#include <numbers>

#include "error.hpp"
#include "geometry.hpp"
#include "group.hpp"
#include "rng.hpp"
#include "step_law.hpp"

namespace hyperwalk {

/// Beyond |τ| = 30 a Cartesian point is within ~1e-13 of a pole; positions
/// are then reported as the pole plus a flag while τ-bookkeeping continues.
inline constexpr double kSaturationTau = 30.0;

struct Position {
  DiskPoint<double> point;
  bool saturated = false;
};

/// Cartesian position of (ς, τ), saturating onto ±α for |τ| > 30.
inline Position position_from_bipolar(const BipolarPoint<double>& b) {
  if (std::abs(b.tau) > kSaturationTau) {
    return {DiskPoint<double>(b.pole.signed_value(b.tau > 0 ? 1 : -1)), true};
  }
  return {from_bipolar(b), false};
}

struct WalkState {
  std::uint64_t n = 0;
  double omega = 0.0;
  Pole<double> pole = Pole<double>::unit();
  DiskPoint<double> z0;
  BipolarPoint<double> start;  // bipolar coordinates of z0

  WalkState() = default;
  explicit WalkState(DiskPoint<double> z, Pole<double> p = Pole<double>::unit())
      : pole(p), z0(z), start(to_bipolar(z, p)) {}
  explicit WalkState(BipolarPoint<double> b)
      : pole(b.pole), z0(position_from_bipolar(b).point), start(b) {
    if (std::abs(b.tau) > kSaturationTau) {
      throw DomainError("walk start must satisfy |tau| <= 30");
    }
  }

  /// (ς, τ) of U_n(z0): ς unchanged, τ shifted by ω_n.
  BipolarPoint<double> bipolar() const {
    return BipolarPoint<double>(start.varsigma, start.tau + omega, pole);
  }
};

inline WalkState u_walk_step(WalkState s, double gamma) {
  s.omega += gamma;
  ++s.n;
  return s;
}

inline Position current_position(const WalkState& s) {
  if (std::abs(s.omega) > kSaturationTau) return position_from_bipolar(s.bipolar());
  return {apply(GroupElement<double>(s.omega, s.pole), s.z0), false};
}

struct ZWalkState {
  std::uint64_t n = 0;
  std::uint64_t S = 0;       // number of gyration steps so far
  double omega_tilde = 0.0;  // sum of γ over gyration steps
  double varsigma = 0.0;
  double tau0 = 0.0;
  double p = 0.5;
  Pole<double> pole = Pole<double>::unit();

  BipolarPoint<double> bipolar() const {
    return BipolarPoint<double>(varsigma, tau0 + omega_tilde, pole);
  }
};

/// Applies one transition with given randomness: coin, the γ used if the
/// coin is 1, and the angle used if it is 0.
inline ZWalkState z_walk_transition(ZWalkState s, bool coin, double gamma, double new_varsigma) {
  if (coin) {
    s.omega_tilde += gamma;
    ++s.S;
  } else {
    s.varsigma = new_varsigma;
  }
  ++s.n;
  return s;
}

/// The three independent sources a trajectory draws from.  The step stream is
/// consumed only on gyration steps, so the k-th gyration uses the k-th γ of
/// the trajectory's step stream, exactly as in a U-walk with the same seed.
struct TrajectoryStreams {
  PhiloxStream steps;
  PhiloxStream coins;
  PhiloxStream angles;

  TrajectoryStreams(std::uint64_t seed, std::uint64_t trajectory)
      : steps(seed, trajectory, Substream::steps),
        coins(seed, trajectory, Substream::coins),
        angles(seed, trajectory, Substream::angles) {}
};

inline double uniform_angle(PhiloxStream& rng) {
  return (rng.uniform_open() - 0.5) * std::numbers::pi;
}

inline ZWalkState z_walk_step(const ZWalkState& s, const StepLaw& law, TrajectoryStreams& rng) {
  const bool coin = rng.coins.uniform_open() < s.p;
  if (coin) return z_walk_transition(s, true, sample_step(law, rng.steps).gamma, 0.0);
  return z_walk_transition(s, false, 0.0, uniform_angle(rng.angles));
}

inline Position z_current_position(const ZWalkState& s) { return position_from_bipolar(s.bipolar()); }

/// Second evaluation path: g_{ω̃_n} applied to the point (ς_n, τ_0).
inline Position z_position_by_gyration(const ZWalkState& s) {
  const BipolarPoint<double> base(s.varsigma, s.tau0, s.pole);
  if (std::abs(s.tau0 + s.omega_tilde) > kSaturationTau) return position_from_bipolar(s.bipolar());
  return {apply(GroupElement<double>(s.omega_tilde, s.pole), from_bipolar(base)), false};
}

}  // namespace hyperwalk
