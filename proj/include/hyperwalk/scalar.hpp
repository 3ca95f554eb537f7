#pragma once

#include <complex>

#include <boost/math/constants/constants.hpp>

namespace hyperwalk {

/// Complex type paired with a real scalar.  Specialized in quad.hpp for
/// binary128.
template <class Real>
struct complex_of {
  using type = std::complex<Real>;
};

template <class Real>
using complex_t = typename complex_of<Real>::type;

template <class Real>
inline Real pi_v() {
  return boost::math::constants::pi<Real>();
}

template <class Real>
inline Real half_pi_v() {
  return boost::math::constants::half_pi<Real>();
}

/// sign with the convention sign(0) = +1.
template <class Real>
inline Real sign_nonneg(const Real& v) {
  return v < Real(0) ? Real(-1) : Real(1);
}

/// log(1 + e^v) without overflow.
template <class Real>
inline Real softplus(const Real& v) {
  using std::exp;
  using std::log1p;
  return v > Real(0) ? v + log1p(exp(-v)) : log1p(exp(v));
}

}  // namespace hyperwalk
