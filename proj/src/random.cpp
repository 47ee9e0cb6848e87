#include <albert/random.hpp>

namespace albert {

Scalar Rng::scalar(const RingPtr& ring) {
  switch (ring->kind()) {
    case RingKind::Rationals: {
      const long num = range(-bounds_.numerator, bounds_.numerator);
      const long den = range(1, bounds_.denominator);
      return Scalar::from_rational(ring, mpq_class(num, den));
    }
    case RingKind::PrimeField:
      return Scalar::from_int(ring, static_cast<long>(below(static_cast<std::uint64_t>(ring->modulus()))));
    case RingKind::Extension: {
      Vec c;
      for (std::size_t i = 0; i < ring->degree(); ++i) c.push_back(scalar(ring->base()));
      return Scalar::from_coeffs(ring, std::move(c));
    }
    case RingKind::Polynomial:
    case RingKind::RationalFunctions:
      return embed(scalar(ring->base()), ring);
  }
  return Scalar::zero(ring);
}

Scalar Rng::nonzero_scalar(const RingPtr& ring) {
  for (;;) {
    Scalar s = scalar(ring);
    if (!s.is_zero()) return s;
  }
}

Vec Rng::vector(const RingPtr& ring, std::size_t n) {
  Vec v;
  v.reserve(n);
  for (std::size_t i = 0; i < n; ++i) v.push_back(scalar(ring));
  return v;
}

}  // namespace albert
