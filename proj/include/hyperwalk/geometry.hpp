#pragma once

// Deterministic geometry of the Poincaré disk: metric, Busemann functions,
// bipolar coordinates relative to a pole pair ±α, and the circles through
// both poles.

#include <cmath>
#include <string>

#include "error.hpp"
#include "scalar.hpp"

namespace hyperwalk {

template <class Real>
struct tolerances {
  static Real closed_disk() { return Real(1e-12); }
  static Real unit_pole() { return Real(1e-12); }
  static Real circle_membership() { return Real(1e-9); }
  static Real degenerate_circle() { return Real(1e-12); }
};

/// A boundary point α fixing the pole pair (α, −α).
template <class Real = double>
class Pole {
 public:
  using complex_type = complex_t<Real>;

  explicit Pole(complex_type alpha) : alpha_(alpha) {
    using std::abs;
    if (!(abs(Real(abs(alpha_)) - Real(1)) <= tolerances<Real>::unit_pole())) {
      throw DomainError("pole must lie on the unit circle");
    }
  }

  /// α = e^{iθ}.
  static Pole from_angle(Real theta) {
    using std::cos;
    using std::sin;
    return Pole(complex_type(cos(theta), sin(theta)));
  }

  static Pole unit() { return Pole(complex_type(Real(1), Real(0))); }

  const complex_type& value() const { return alpha_; }
  complex_type opposite() const { return -alpha_; }

  /// εα for ε ∈ {−1, +1}.
  complex_type signed_value(int epsilon) const { return epsilon < 0 ? -alpha_ : alpha_; }

  friend bool operator==(const Pole& a, const Pole& b) { return a.alpha_ == b.alpha_; }

 private:
  complex_type alpha_;
};

/// Point of the closed unit disk.
template <class Real = double>
class DiskPoint {
 public:
  using complex_type = complex_t<Real>;

  DiskPoint() : z_(Real(0), Real(0)) {}
  DiskPoint(Real re, Real im) : DiskPoint(complex_type(re, im)) {}
  explicit DiskPoint(complex_type z) : z_(z) {
    const Real bound = Real(1) + tolerances<Real>::closed_disk();
    if (!(Real(norm(z_)) <= bound * bound)) {
      throw DomainError("point lies outside the closed unit disk");
    }
  }

  const complex_type& value() const { return z_; }
  Real re() const { return Real(real(z_)); }
  Real im() const { return Real(imag(z_)); }
  Real modulus() const {
    using std::abs;
    return Real(abs(z_));
  }

  bool interior() const {
    const Real bound = Real(1) - tolerances<Real>::closed_disk();
    return Real(norm(z_)) < bound * bound;
  }

  friend bool operator==(const DiskPoint& a, const DiskPoint& b) { return a.z_ == b.z_; }

 private:
  complex_type z_;
};

/// Bipolar coordinates (ς, τ) relative to ±α:
///   (z + α) / (α − z) = e^{τ + iς},  ς ∈ [−π/2, π/2].
/// ς is the continuous angular coordinate; the classical σ is derived from it
/// as σ = sign(ς)·π − ς with sign(0) = +1, so the diameter l_α sits at σ = π.
template <class Real = double>
struct BipolarPoint {
  Real varsigma{0};
  Real tau{0};
  Pole<Real> pole = Pole<Real>::unit();

  BipolarPoint() = default;
  BipolarPoint(Real varsigma_, Real tau_, Pole<Real> pole_ = Pole<Real>::unit())
      : varsigma(varsigma_), tau(tau_), pole(pole_) {
    const Real limit = half_pi_v<Real>() + Real(1e-12);
    if (!(varsigma <= limit && varsigma >= -limit)) {
      throw DomainError("bipolar angle ς must lie in [-pi/2, pi/2]");
    }
    using std::isnan;
    if (isnan(tau)) throw DomainError("bipolar τ is NaN");
  }

  Real sigma() const { return sign_nonneg(varsigma) * pi_v<Real>() - varsigma; }
};

/// Circle of the elliptic pencil through ±α (an orbit circle H_z).
template <class Real = double>
struct ApollonianCircle {
  complex_t<Real> center;
  Real radius;
  Pole<Real> pole;
};

/// Hyperbolic distance log((1+ρ)/(1−ρ)), ρ = |(z−w)/(1−z̄w)|.
template <class Real>
Real poincare_distance(const DiskPoint<Real>& z, const DiskPoint<Real>& w) {
  using std::abs;
  using std::log;
  if (!z.interior() || !w.interior()) {
    throw DomainError("poincare_distance: boundary point has infinite distance");
  }
  using std::sqrt;
  const auto num = z.value() - w.value();
  const auto den = complex_t<Real>(Real(1), Real(0)) - conj(z.value()) * w.value();
  const Real rho = sqrt(Real(norm(num)) / Real(norm(den)));
  return log((Real(1) + rho) / (Real(1) - rho));
}

/// Busemann function B_ξ(z) = −log((1−|z|²)/|ξ−z|²).
template <class Real>
Real busemann(const complex_t<Real>& xi, const DiskPoint<Real>& z) {
  using std::abs;
  using std::log;
  if (!(abs(Real(norm(xi)) - Real(1)) <= Real(2) * tolerances<Real>::unit_pole())) {
    throw DomainError("busemann: ξ must lie on the unit circle");
  }
  if (!z.interior()) throw DomainError("busemann: z must be interior");
  const Real r2 = Real(norm(z.value()));
  return -log((Real(1) - r2) / Real(norm(xi - z.value())));
}

template <class Real>
Real busemann(const Pole<Real>& pole, int epsilon, const DiskPoint<Real>& z) {
  return busemann<Real>(pole.signed_value(epsilon), z);
}

/// The classical bipolar angle: σ = sign(Im(ᾱz))·∠(−α, z, α), with the
/// angle at z in (0, π] and sign(0) = +1.  Computed from the triangle, not
/// from ς; used to cross-check to_bipolar.
template <class Real>
Real sigma_coordinate(const DiskPoint<Real>& z, const Pole<Real>& pole) {
  using std::abs;
  using std::arg;
  const auto& a = pole.value();
  const auto to_minus = -a - z.value();
  const auto to_plus = a - z.value();
  if (abs(to_minus) == Real(0) || abs(to_plus) == Real(0)) {
    throw PoleSingularity("sigma_coordinate: z coincides with a pole");
  }
  Real angle = abs(Real(arg(to_plus / to_minus)));
  if (angle == Real(0)) angle = pi_v<Real>();
  return sign_nonneg(Real(imag(conj(a) * z.value()))) * angle;
}

template <class Real>
BipolarPoint<Real> to_bipolar(const DiskPoint<Real>& z, const Pole<Real>& pole) {
  using std::abs;
  using std::arg;
  using std::log;
  const auto& a = pole.value();
  const Real to_plus2 = Real(norm(z.value() - a));
  const Real to_minus2 = Real(norm(z.value() + a));
  if (to_plus2 == Real(0) || to_minus2 == Real(0)) {
    throw PoleSingularity("to_bipolar: z coincides with a pole");
  }
  const Real tau = log(to_minus2 / to_plus2) / Real(2);
  Real varsigma = Real(arg((z.value() + a) / (a - z.value())));
  // Re((z+α)/(α−z)) = (1−|z|²)/|α−z|² >= 0 on the closed disk; clamp roundoff.
  const Real h = half_pi_v<Real>();
  if (varsigma > h) varsigma = h;
  if (varsigma < -h) varsigma = -h;
  if (varsigma == Real(0)) varsigma = Real(0);  // drop a negative zero
  return BipolarPoint<Real>(varsigma, tau, pole);
}

/// Cartesian image of (ς, τ) via x = sinh τ/(cosh τ − cos σ),
/// y = sin σ/(cosh τ − cos σ) in the frame α = 1, rotated by α.
template <class Real>
DiskPoint<Real> from_bipolar(const BipolarPoint<Real>& b) {
  using std::abs;
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  if (abs(b.tau) > Real(700)) {
    throw OverflowGuard("from_bipolar: |tau| > 700, use the pole limit instead");
  }
  // sin σ = sin ς and cos σ = −cos ς exactly.
  const Real den = cosh(b.tau) + cos(b.varsigma);
  const complex_t<Real> frame(sinh(b.tau) / den, sin(b.varsigma) / den);
  return DiskPoint<Real>(b.pole.value() * frame);
}

/// Circle H_z through −α, α and z: center −iαc, radius √(1+c²), where c
/// solves |z + icα|² = 1 + c².
template <class Real>
ApollonianCircle<Real> orbit_circle(const DiskPoint<Real>& z, const Pole<Real>& pole) {
  using std::abs;
  using std::sqrt;
  const auto& a = pole.value();
  const complex_t<Real> i(Real(0), Real(1));
  const Real lever = Real(real(i * conj(z.value()) * a));
  if (abs(lever) < tolerances<Real>::degenerate_circle()) {
    throw DegenerateCircle("orbit_circle: z lies on the diameter through the poles");
  }
  const Real c = (Real(1) - Real(norm(z.value()))) / (Real(2) * lever);
  return ApollonianCircle<Real>{-i * a * c, sqrt(Real(1) + c * c), pole};
}

/// Membership in H_z via the cross-ratio test: the product
/// ((u+α)/(u−α))·((z−α)/(z+α)) is real.  Tested as |Im q| <= tol·|q| so the
/// check stays meaningful when u approaches a pole and q grows without bound.
template <class Real>
bool on_orbit_circle(const complex_t<Real>& u, const DiskPoint<Real>& z, const Pole<Real>& pole,
                     Real tol = tolerances<Real>::circle_membership()) {
  using std::abs;
  const auto& a = pole.value();
  if (u == a || u == -a || z.value() == a || z.value() == -a) {
    throw PoleSingularity("on_orbit_circle: argument coincides with a pole");
  }
  const auto q = ((u + a) / (u - a)) * ((z.value() - a) / (z.value() + a));
  const Real im = Real(imag(q));
  return im * im <= tol * tol * Real(norm(q));
}

// τ-domain evaluation.  Everything below depends only on (ς, τ) and stays
// exact for arbitrarily large |τ|, where Cartesian coordinates have long
// since rounded onto the pole.

/// B_{εα} at the point with bipolar coordinates (ς, τ):
///   B_α = −τ − log cos ς,   B_{−α} = τ − log cos ς.
template <class Real>
Real busemann_bipolar(const BipolarPoint<Real>& b, int epsilon) {
  using std::cos;
  using std::log;
  const Real tail = Real(0) - log(cos(b.varsigma));  // +0 at ς = 0
  return epsilon > 0 ? -b.tau + tail : b.tau + tail;
}

/// log|z − εα| at (ς, τ).
template <class Real>
Real log_distance_to_pole(const BipolarPoint<Real>& b, int epsilon) {
  using std::abs;
  using std::cos;
  using std::exp;
  using std::log;
  using std::log1p;
  // z = α tanh((τ+iς)/2), so |z−α| = 2/|1+e^w| and |z+α| = 2e^τ/|1+e^w|.
  const Real c = cos(b.varsigma);
  Real log_mod;  // log|1 + e^{τ+iς}|
  if (b.tau >= Real(0)) {
    const Real e = exp(-b.tau);
    log_mod = b.tau + log1p(Real(2) * c * e + e * e) / Real(2);
  } else {
    const Real e = exp(b.tau);
    log_mod = log1p(Real(2) * c * e + e * e) / Real(2);
  }
  const Real ln2 = boost::math::constants::ln_two<Real>();
  return epsilon > 0 ? ln2 - log_mod : ln2 + b.tau - log_mod;
}

/// d_p(0, z) at (ς, τ).
template <class Real>
Real origin_distance_bipolar(const BipolarPoint<Real>& b) {
  using std::abs;
  using std::cos;
  using std::exp;
  using std::log;
  using std::log1p;
  using std::sqrt;
  // With k = cos ς / cosh τ:  |z|² = (1−k)/(1+k),  1 − |z|² = 2k/(1+k).
  const Real t = abs(b.tau);
  const Real e = exp(-t);
  const Real c = cos(b.varsigma);
  const Real k = Real(2) * c * e / (Real(1) + e * e);
  const Real r = sqrt((Real(1) - k) / (Real(1) + k));
  const Real ln2 = boost::math::constants::ln_two<Real>();
  const Real log_k = ln2 + log(c) - t - log1p(e * e);
  return Real(2) * log1p(r) - ln2 - log_k + log1p(k);
}

}  // namespace hyperwalk
