#pragma once

// Textual field specifications and scalar expressions.
//
// Field grammar (nesting allowed, at most three layers above the prime field):
//   field := "Q" | "F" prime | field "[" name "]/(" modulus ")" | field "(" name ")"
// The modulus is a monic polynomial of degree 2 or 3 in `name`, e.g.
// Q[s]/(s^2-(-1)), Q[x]/(x^3-3x-1), F7[s]/(s^2-3), Q(t).
//
// Scalar expressions use + - * / ^, parentheses, integer and decimal-free
// rational literals, implicit multiplication (3x, 2(s+1)) and the generator
// names visible in the target ring's tower.

#include <albert/scalar.hpp>

#include <string_view>

namespace albert {

RingPtr parse_field(std::string_view text);
Scalar parse_scalar(std::string_view text, const RingPtr& ring);

}  // namespace albert
