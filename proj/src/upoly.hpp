#pragma once

// Dense univariate polynomials over a field, as ascending coefficient lists.
// Internal helpers for rational functions and separability tests.

#include <albert/scalar.hpp>

#include <vector>

namespace albert::upoly {

using UPoly = std::vector<Scalar>;

void trim(UPoly& a);
UPoly add(const UPoly& a, const UPoly& b);
UPoly sub(const UPoly& a, const UPoly& b);
UPoly mul(const UPoly& a, const UPoly& b);
UPoly scale(const UPoly& a, const Scalar& c);
// a = q*b + r with deg r < deg b; b must be nonzero with invertible leading
// coefficient.
void divmod(const UPoly& a, const UPoly& b, UPoly& q, UPoly& r);
// Monic gcd; gcd(0, 0) = 0 (empty).
UPoly gcd(UPoly a, UPoly b);
Scalar eval(const UPoly& a, const Scalar& x, const RingPtr& field);
UPoly derivative(const UPoly& a);

}  // namespace albert::upoly
