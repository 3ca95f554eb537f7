#pragma once

// Randomized checks of the exact identities linking the Möbius walk to its
// scalar walk ω_n.  Templated on the scalar so the same checks run in double
// (moderate |ω|) and in binary128 (|ω| up to 30, where double Cartesian
// coordinates no longer resolve the distance to the poles).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "ensemble.hpp"
#include "geometry.hpp"
#include "group.hpp"
#include "rng.hpp"

namespace hyperwalk {

struct CheckTally {
  std::string name;
  std::uint64_t passed = 0;
  std::uint64_t failed = 0;
  double max_error = 0.0;

  void record(bool ok, double error) {
    (ok ? passed : failed)++;
    if (!(error <= max_error)) max_error = error;  // NaN sticks
  }
};

struct IdentityReport {
  std::string precision;
  std::uint64_t cases = 0;
  std::uint64_t steps = 0;
  double omega_cap = 0.0;
  double tolerance = 0.0;
  double max_abs_omega = 0.0;
  std::vector<CheckTally> checks;

  std::uint64_t passed() const {
    std::uint64_t n = 0;
    for (const auto& c : checks) n += c.passed;
    return n;
  }
  std::uint64_t failed() const {
    std::uint64_t n = 0;
    for (const auto& c : checks) n += c.failed;
    return n;
  }
  bool all_passed() const { return failed() == 0; }
};

template <class Real>
struct IdentityCase {
  Pole<Real> pole;
  DiskPoint<Real> z0;        // interior start
  DiskPoint<Real> w0;        // second interior point (isometry)
  DiskPoint<Real> boundary;  // boundary start off the diameter l_α
  std::vector<Real> gammas;  // |partial sums| <= cap
};

/// Case t of the suite: a pole, starting points and a 200-step γ path with a
/// random drift, reflected so that |ω_n| stays within omega_cap.
template <class Real>
IdentityCase<Real> make_identity_case(std::uint64_t seed, std::uint64_t t, double omega_cap,
                                      std::size_t steps) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  PhiloxStream rng(seed, t, Substream::steps);
  const double two_pi = 2.0 * std::numbers::pi;
  const Real phi(two_pi * rng.uniform_open());
  const Pole<Real> pole = Pole<Real>::from_angle(phi);
  auto interior = [&](double rmax) {
    const Real r(rmax * std::sqrt(rng.uniform_open()));
    const Real th(two_pi * rng.uniform_open());
    return DiskPoint<Real>(complex_t<Real>(r * cos(th), r * sin(th)));
  };
  DiskPoint<Real> z0 = interior(0.95);
  if (t % 10 == 0) {
    // On the diameter l_α: ς = 0.
    const Real s(1.9 * rng.uniform_open() - 0.95);
    z0 = DiskPoint<Real>(pole.value() * s);
  }
  const DiskPoint<Real> w0 = interior(0.95);
  // Boundary point e^{i(φ+θ)} with θ kept 0.05 away from 0 and ±π.
  const double side = rng.uniform_open() < 0.5 ? -1.0 : 1.0;
  const Real theta(side * (0.05 + (std::numbers::pi - 0.1) * rng.uniform_open()));
  const DiskPoint<Real> boundary(pole.value() * complex_t<Real>(cos(theta), sin(theta)));

  IdentityCase<Real> c{pole, z0, w0, boundary, {}};
  const double drift = 0.3 * (2.0 * rng.uniform_open() - 1.0);
  double omega = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    double g = drift + 0.8 * (2.0 * rng.uniform_open() - 1.0);
    if (std::abs(omega + g) > omega_cap) g = -g;
    omega += g;
    c.gammas.push_back(Real(g));
  }
  return c;
}

/// Runs every identity on `trials` cases; each check is tallied per step.
/// threads = 0 uses every hardware thread; the report does not depend on it.
template <class Real>
IdentityReport run_identity_suite(std::uint64_t trials, std::uint64_t seed, double omega_cap,
                                  const std::string& precision, std::size_t steps = 200,
                                  double tolerance = 1e-9, unsigned threads = 0) {
  using std::abs;
  using std::exp;
  using std::log;
  using std::sqrt;
  using std::tanh;
  const Real tol(tolerance);
  IdentityReport rep;
  rep.precision = precision;
  rep.cases = trials;
  rep.steps = steps;
  rep.omega_cap = omega_cap;
  rep.tolerance = tolerance;
  enum { kBipoTau, kBipoAngle, kBuzPlus, kBuzMinus, kCurious, kCinv, kCircle, kZero, kMon,
         kAngularPlus, kAngularMinus, kCompose, kCommute, kIsometry, kFixed, kDiameter, kPermute,
         kCount };
  rep.checks.resize(kCount);
  const char* names[kCount] = {
      "bipolar tau shift",        "bipolar angle invariance", "busemann shift (+alpha)",
      "busemann shift (-alpha)",  "cross-ratio",              "orbit circle (cross-ratio)",
      "orbit circle (center)",    "distance sandwich",        "monotonicity equivalence",
      "boundary half-angle (+)",  "boundary half-angle (-)",  "composition law",
      "commutativity",            "isometry",                 "fixed poles",
      "diameter invariance",      "permutation invariance"};
  for (int i = 0; i < kCount; ++i) rep.checks[i].name = names[i];

  // One partial report per case, merged in case order.
  std::vector<IdentityReport> parts(trials);
  parallel_for(trials, threads, [&](std::uint64_t t) {
    IdentityReport& part = parts[t];
    part.checks.resize(kCount);
    auto rec = [&](int id, const Real& err) {
      const double e = static_cast<double>(err);
      part.checks[id].record(err <= tol, e);
    };
    const auto c = make_identity_case<Real>(seed, t, omega_cap, steps);
    const auto& a = c.pole.value();
    const auto b0 = to_bipolar(c.z0, c.pole);
    const Real buz_plus0 = busemann(c.pole, +1, c.z0);
    const Real buz_minus0 = busemann(c.pole, -1, c.z0);
    const auto ratio0 = (c.z0.value() + a) / (c.z0.value() - a);
    const Real dist0 = poincare_distance(DiskPoint<Real>(), c.z0);
    const Real dist_zw = poincare_distance(c.z0, c.w0);
    const bool has_circle = abs(Real(real(complex_t<Real>(Real(0), Real(1)) * conj(c.z0.value()) * a))) >=
                            tolerances<Real>::degenerate_circle();
    const auto circle = has_circle ? orbit_circle(c.z0, c.pole) : ApollonianCircle<Real>{{}, Real(0), c.pole};
    auto half_angles = [&](const DiskPoint<Real>& u) {
      // log tan(ψ/2) for ψ⁺ = ∠(u, 0, −α) and ψ⁻ = ∠(u, 0, α), via
      // tan(ψ/2) = sin ψ/(1 + cos ψ) = (1 − cos ψ)/sin ψ, picking the form
      // without cancellation.
      auto log_tan_half = [](const complex_t<Real>& v) {
        const Real c = Real(real(v));
        const Real s = abs(Real(imag(v)));
        return c >= Real(0) ? log(s / (Real(1) + c)) : log((Real(1) - c) / s);
      };
      return std::pair{log_tan_half(u.value() / (-a)), log_tan_half(u.value() / a)};
    };
    const auto [ang_plus0, ang_minus0] = half_angles(c.boundary);
    const Real xd(0.6 * (static_cast<double>(t % 7) / 3.0 - 1.0));  // start on l_α
    const DiskPoint<Real> on_diameter(a * xd);

    Real omega(0);
    DiskPoint<Real> prev = c.z0;
    Real buz_plus_prev = buz_plus0;
    GroupElement<Real> g_prev = GroupElement<Real>::identity(c.pole);
    for (std::size_t k = 0; k < c.gammas.size(); ++k) {
      const Real gamma = c.gammas[k];
      omega += gamma;
      part.max_abs_omega = std::max(part.max_abs_omega, static_cast<double>(abs(omega)));
      const GroupElement<Real> g(omega, c.pole);
      const DiskPoint<Real> u = apply(g, c.z0);

      const auto b = to_bipolar(u, c.pole);
      rec(kBipoTau, abs(b.tau - (b0.tau + omega)));
      rec(kBipoAngle, abs(b.varsigma - b0.varsigma));

      const Real buz_plus = busemann(c.pole, +1, u);
      rec(kBuzPlus, abs(buz_plus + omega - buz_plus0));
      rec(kBuzMinus, abs(busemann(c.pole, -1, u) - omega - buz_minus0));

      const auto lhs = (u.value() + a) / (u.value() - a);
      const auto rhs = ratio0 * exp(omega);
      rec(kCurious, sqrt(Real(norm(lhs - rhs)) / Real(norm(rhs))));

      if (on_orbit_circle(u.value(), c.z0, c.pole, tol)) {
        rec(kCinv, Real(0));
      } else {
        const auto q = lhs / ratio0;
        rec(kCinv, abs(Real(imag(q))) / Real(abs(q)));
      }
      if (has_circle) {
        rec(kCircle, abs(Real(abs(u.value() - circle.center)) - circle.radius) / circle.radius);
      }

      const Real d = poincare_distance(DiskPoint<Real>(), u);
      rec(kZero, std::max(Real(0), abs(d - abs(omega)) - dist0));

      if (abs(gamma) > Real(1e-12)) {
        const bool up = gamma > Real(0);
        const bool closer = abs(u.value() - a) < abs(prev.value() - a);
        const bool lower = buz_plus < buz_plus_prev;
        rec(kMon, (up == closer && closer == lower) ? Real(0) : Real(1));
      }

      const DiskPoint<Real> bu = apply(g, c.boundary);
      const auto [ang_plus, ang_minus] = half_angles(bu);
      rec(kAngularPlus, abs(ang_plus - (ang_plus0 + omega)));
      rec(kAngularMinus, abs(ang_minus - (ang_minus0 - omega)));

      const GroupElement<Real> step(gamma, c.pole);
      const DiskPoint<Real> stepped = apply(step, prev);
      rec(kCompose, Real(abs(stepped.value() - u.value())));
      const DiskPoint<Real> swapped = apply(g_prev, apply(step, c.z0));
      rec(kCommute, Real(abs(swapped.value() - stepped.value())));

      const DiskPoint<Real> gw = apply(g, c.w0);
      rec(kIsometry, abs(poincare_distance(u, gw) - dist_zw));

      rec(kFixed, std::max(Real(abs(apply(g, DiskPoint<Real>(a)).value() - a)),
                           Real(abs(apply(g, DiskPoint<Real>(-a)).value() + a))));

      const Real& y = g.x();  // tanh(ω/2)
      const auto expect = a * ((xd + y) / (Real(1) + xd * y));
      rec(kDiameter, Real(abs(apply(g, on_diameter).value() - expect)));

      prev = u;
      g_prev = g;
      buz_plus_prev = buz_plus;
    }

    std::vector<GroupElement<Real>> elems;
    for (const auto& gm : c.gammas) elems.emplace_back(gm, c.pole);
    const Real forward = compose_all<Real>(elems, c.pole).gamma();
    std::reverse(elems.begin(), elems.end());
    const Real backward = compose_all<Real>(elems, c.pole).gamma();
    std::rotate(elems.begin(), elems.begin() + static_cast<std::ptrdiff_t>(t % elems.size()), elems.end());
    const Real rotated = compose_all<Real>(elems, c.pole).gamma();
    part.checks[kPermute].record(forward == backward && forward == rotated,
                                 static_cast<double>(std::max(abs(forward - backward), abs(forward - rotated))));
  });

  for (const auto& part : parts) {
    rep.max_abs_omega = std::max(rep.max_abs_omega, part.max_abs_omega);
    for (int i = 0; i < kCount; ++i) {
      auto& dst = rep.checks[i];
      const auto& src = part.checks[i];
      dst.passed += src.passed;
      dst.failed += src.failed;
      if (!(src.max_error <= dst.max_error)) dst.max_error = src.max_error;
    }
  }
  return rep;
}

}  // namespace hyperwalk
