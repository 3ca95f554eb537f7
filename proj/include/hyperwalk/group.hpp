#pragma once

// The one-parameter abelian group G_α of gyrotranslations fixing ±α:
//   g_γ(z) = (z + xα)/(1 + xᾱz),  x = tanh(γ/2),
// with g_a ∘ g_b = g_{a+b}.

#include <cmath>
#include <span>
#include <vector>

#include "error.hpp"
#include "geometry.hpp"

namespace hyperwalk {

template <class Real = double>
class GroupElement {
 public:
  /// Beyond this |γ| application short-circuits to the attracting pole.
  static Real saturation_gamma() { return Real(700); }

  explicit GroupElement(Real gamma, Pole<Real> pole = Pole<Real>::unit())
      : gamma_(gamma), pole_(pole) {
    using std::isfinite;
    using std::tanh;
    if (!isfinite(gamma_)) throw DomainError("group parameter must be finite");
    x_ = tanh(gamma_ / Real(2));
  }

  static GroupElement identity(Pole<Real> pole = Pole<Real>::unit()) {
    return GroupElement(Real(0), pole);
  }

  Real gamma() const { return gamma_; }
  const Pole<Real>& pole() const { return pole_; }

  /// x-form parameter tanh(γ/2) ∈ (−1, 1).
  const Real& x() const { return x_; }

  GroupElement inverse() const { return GroupElement(-gamma_, pole_); }

  bool saturated() const {
    using std::abs;
    return abs(gamma_) > saturation_gamma();
  }

 private:
  Real gamma_;
  Real x_;
  Pole<Real> pole_;
};

/// γ = log((1+x)/(1−x)).
template <class Real>
GroupElement<Real> from_x(Real x, Pole<Real> pole = Pole<Real>::unit()) {
  using std::abs;
  using std::log;
  if (!(abs(x) < Real(1))) throw DomainError("from_x: |x| must be < 1");
  return GroupElement<Real>(log((Real(1) + x) / (Real(1) - x)), pole);
}

template <class Real>
GroupElement<Real> compose(const GroupElement<Real>& a, const GroupElement<Real>& b) {
  if (!(a.pole() == b.pole())) throw PoleMismatch("compose: elements fix different poles");
  return GroupElement<Real>(a.gamma() + b.gamma(), a.pole());
}

/// Correctly rounded sum of the inputs (Shewchuk's partials algorithm), so the
/// result does not depend on the order of the terms.
template <class Real>
Real exact_sum(std::span<const Real> terms) {
  using std::abs;
  std::vector<Real> partials;
  for (Real x : terms) {
    std::size_t used = 0;
    for (Real y : partials) {
      if (abs(x) < abs(y)) std::swap(x, y);
      const Real hi = x + y;
      const Real lo = y - (hi - x);
      if (lo != Real(0)) partials[used++] = lo;
      x = hi;
    }
    partials.resize(used);
    partials.push_back(x);
  }
  // Round the expansion to nearest, as in Python's math.fsum.
  if (partials.empty()) return Real(0);
  std::size_t n = partials.size() - 1;
  Real hi = partials[n];
  Real lo(0);
  while (n > 0) {
    const Real x = hi;
    const Real y = partials[--n];
    hi = x + y;
    lo = y - (hi - x);
    if (lo != Real(0)) break;
  }
  if (n > 0 && ((lo < Real(0) && partials[n - 1] < Real(0)) ||
                (lo > Real(0) && partials[n - 1] > Real(0)))) {
    const Real y = lo * Real(2);
    const Real x = hi + y;
    if (y == x - hi) hi = x;
  }
  return hi;
}

/// g_{γ_1} ∘ ... ∘ g_{γ_k}; identical for every ordering of the factors.
template <class Real>
GroupElement<Real> compose_all(std::span<const GroupElement<Real>> elements, Pole<Real> pole) {
  std::vector<Real> gammas;
  gammas.reserve(elements.size());
  for (const auto& g : elements) {
    if (!(g.pole() == pole)) throw PoleMismatch("compose_all: elements fix different poles");
    gammas.push_back(g.gamma());
  }
  return GroupElement<Real>(exact_sum<Real>(gammas), pole);
}

template <class Real>
DiskPoint<Real> apply(const GroupElement<Real>& g, const DiskPoint<Real>& z) {
  const auto& a = g.pole().value();
  if (z.value() == a || z.value() == -a) return z;
  if (g.saturated()) {
    return DiskPoint<Real>(g.gamma() > Real(0) ? a : complex_t<Real>(-a));
  }
  const Real x = g.x();
  const complex_t<Real> one(Real(1), Real(0));
  return DiskPoint<Real>((z.value() + x * a) / (one + x * conj(a) * z.value()));
}

/// T_z(u) = α²(z + u)/(α² + zu): the Möbius map carrying the diameter l_α
/// onto the orbit circle H_z, with T_z(0) = z and T_z(±α) = ±α.
template <class Real>
DiskPoint<Real> apply_Tz(const Pole<Real>& pole, const DiskPoint<Real>& z,
                         const DiskPoint<Real>& u) {
  const auto a2 = pole.value() * pole.value();
  const auto den = a2 + z.value() * u.value();
  if (den == complex_t<Real>(Real(0), Real(0))) {
    throw PoleSingularity("apply_Tz: alpha^2 + z u vanishes");
  }
  return DiskPoint<Real>(a2 * (z.value() + u.value()) / den);
}

/// Isometric parametrization of H_z ∩ D by δ ∈ ℝ: τ̂_z(δ) = T_z(tanh(δ/2)·α).
/// τ̂_z(ω_n) = U_n(z).
template <class Real>
DiskPoint<Real> tau_hat(const Pole<Real>& pole, const DiskPoint<Real>& z, Real delta) {
  using std::tanh;
  if (!z.interior()) throw DomainError("tau_hat: z must be interior");
  const DiskPoint<Real> on_diameter(tanh(delta / Real(2)) * pole.value());
  return apply_Tz(pole, z, on_diameter);
}

}  // namespace hyperwalk
