#pragma once

// Seeded sampling for property checks. The generator is std::mt19937_64 and
// every draw reduces a raw 64-bit output modulo the range width, so a given
// seed produces the same samples on every platform and standard library.

#include <albert/matrix.hpp>

#include <cstdint>
#include <random>

namespace albert {

struct SampleBounds {
  long numerator = 5;    // numerators drawn from [-numerator, numerator]
  long denominator = 3;  // denominators drawn from [1, denominator]
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed, SampleBounds bounds = {}) : gen_(seed), bounds_(bounds) {}

  std::uint64_t below(std::uint64_t n) { return gen_() % n; }
  long range(long lo, long hi) { return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1))); }

  // A random element of `ring`: small rationals over Q, uniform residues over
  // F_p, random coordinates in extensions, random constants otherwise.
  Scalar scalar(const RingPtr& ring);
  Scalar nonzero_scalar(const RingPtr& ring);
  Vec vector(const RingPtr& ring, std::size_t n);

  const SampleBounds& bounds() const { return bounds_; }

 private:
  std::mt19937_64 gen_;
  SampleBounds bounds_;
};

}  // namespace albert
