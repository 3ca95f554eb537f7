#pragma once

// Optional binary128 instantiation of the geometry templates.  Needs GNU
// extensions (-std=gnu++20) and libquadmath.

#include <boost/multiprecision/complex128.hpp>
#include <boost/multiprecision/float128.hpp>

#include "geometry.hpp"
#include "scalar.hpp"

namespace hyperwalk {

using quad = boost::multiprecision::float128;

template <>
struct complex_of<quad> {
  using type = boost::multiprecision::complex128;
};

/// Membership tolerances scaled to the 113-bit significand, so that points
/// with |τ| up to ~60 still count as interior.
template <>
struct tolerances<quad> {
  static quad closed_disk() { return quad(1e-30); }
  static quad unit_pole() { return quad(1e-30); }
  static quad circle_membership() { return quad(1e-9); }
  static quad degenerate_circle() { return quad(1e-12); }
};

}  // namespace hyperwalk
