#include <albert/parse.hpp>
#include <albert/random.hpp>

#include <gtest/gtest.h>

using namespace albert;

namespace {

Scalar q(const RingPtr& r, long n, long d = 1) { return Scalar::from_rational(r, mpq_class(n, d)); }

}  // namespace

TEST(Rationals, CanonicalArithmetic) {
  const RingPtr Q = Ring::rationals();
  EXPECT_EQ(q(Q, 1, 2) + q(Q, 1, 3), q(Q, 5, 6));
  EXPECT_EQ(q(Q, 2, 4), q(Q, 1, 2));
  EXPECT_EQ((q(Q, 3, 7) * q(Q, 7, 3)), Scalar::one(Q));
  EXPECT_EQ(q(Q, -4, 6).to_string(), "-2/3");
  EXPECT_THROW(Scalar::zero(Q).inverse(), Error);
}

TEST(PrimeField, InverseAndCharacteristic) {
  const RingPtr F7 = Ring::prime_field(7);
  for (long a = 1; a < 7; ++a) EXPECT_TRUE((Scalar::from_int(F7, a) * Scalar::from_int(F7, a).inverse()).is_one());
  EXPECT_TRUE((7 * Scalar::one(F7)).is_zero());
  EXPECT_EQ(Scalar::from_int(F7, -1), Scalar::from_int(F7, 6));
  EXPECT_EQ(F7->characteristic(), 7);
}

TEST(Extension, GaussianIntegersMultiply) {
  const RingPtr K = parse_field("Q[s]/(s^2+1)");
  const Scalar i = Scalar::generator(K);
  EXPECT_EQ(i * i, -Scalar::one(K));
  const Scalar z = parse_scalar("3+4s", K);
  EXPECT_EQ(ext_norm(z), parse_scalar("25", K->base()));
  EXPECT_EQ(ext_trace(z), parse_scalar("6", K->base()));
  EXPECT_EQ(z * ext_conj(z), parse_scalar("25", K));
  EXPECT_EQ(z * z.inverse(), Scalar::one(K));
  EXPECT_TRUE(K->is_field());
}

TEST(Extension, CubicInverseByOracle) {
  // In Q[x]/(x^3 - 2), (1 + x)^{-1} = (1 - x + x^2)/3 since (1 + x)(1 - x + x^2) = 1 + x^3 = 3.
  const RingPtr L = parse_field("Q[x]/(x^3-2)");
  EXPECT_EQ(parse_scalar("1+x", L).inverse(), parse_scalar("(1-x+x^2)/3", L));
}

TEST(Extension, ReducibleModulusIsNotAField) {
  const RingPtr E = parse_field("Q[x]/(x^3-x)");
  EXPECT_FALSE(E->is_field());
  EXPECT_THROW(parse_scalar("x", E).inverse(), Error);  // x is a zero divisor
}

TEST(Extension, InseparableModulusRejected) {
  EXPECT_THROW(parse_field("F3[x]/(x^3-2)"), Error);
}

TEST(Split, ComponentsRoundTrip) {
  const RingPtr Q = Ring::rationals();
  const RingPtr S = Ring::split_quadratic(Q);
  const Scalar x = split_from_components(S, q(Q, 2), q(Q, 1, 2));
  const auto [a, b] = split_components(x);
  EXPECT_EQ(a, q(Q, 2));
  EXPECT_EQ(b, q(Q, 1, 2));
  EXPECT_TRUE((x * split_from_components(S, q(Q, 1, 2), q(Q, 2))).is_one());
  // Conjugation swaps the components.
  const auto [c, d] = split_components(ext_conj(x));
  EXPECT_EQ(c, b);
  EXPECT_EQ(d, a);
}

TEST(Polynomial, NilpotentVariablesSquareToZero) {
  const RingPtr Q = Ring::rationals();
  const RingPtr P = Ring::polynomial(Q, {"e1", "e2"}, true);
  const Scalar e1 = Scalar::variable(P, 0), e2 = Scalar::variable(P, 1);
  EXPECT_TRUE((e1 * e1).is_zero());
  EXPECT_FALSE((e1 * e2).is_zero());
  EXPECT_EQ((Scalar::one(P) + e1) * (Scalar::one(P) + e2), Scalar::one(P) + e1 + e2 + e1 * e2);
}

TEST(Polynomial, SubstituteAndDegree) {
  const RingPtr Q = Ring::rationals();
  const RingPtr P = Ring::polynomial(Q, 2);
  const Scalar x = Scalar::variable(P, 0), y = Scalar::variable(P, 1);
  const Scalar f = x * x * y - 3 * y + Scalar::one(P);
  EXPECT_EQ(poly_total_degree(f), 3u);
  const Scalar vals[] = {q(Q, 2), q(Q, 5)};
  EXPECT_EQ(poly_substitute(f, vals), q(Q, 20 - 15 + 1));
}

TEST(RationalFunctions, CanonicalFormAndPoles) {
  const RingPtr Q = Ring::rationals();
  const RingPtr Qt = Ring::rational_functions(Q, "t");
  const Scalar t = ratfunc_variable(Qt);
  const Scalar f = (t * t - 1) / (t - 1);
  EXPECT_EQ(f, t + 1);
  const Scalar g = Scalar::one(Qt) / (t - 1);
  EXPECT_EQ(ratfunc_eval(g, q(Q, 3)), q(Q, 1, 2));
  try {
    ratfunc_eval(g, q(Q, 1));
    FAIL() << "expected a pole";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::PoleAtPoint);
  }
}

TEST(Coercion, JoinAndIncompatibleParents) {
  const RingPtr Q = Ring::rationals();
  const RingPtr K = parse_field("Q[s]/(s^2+1)");
  EXPECT_TRUE(embeds(*Q, *K));
  EXPECT_FALSE(embeds(*K, *Q));
  EXPECT_EQ((q(Q, 2) + Scalar::generator(K)).ring().get(), K.get());
  const RingPtr F5 = Ring::prime_field(5);
  try {
    (void)(Scalar::one(F5) + Scalar::one(Q));
    FAIL() << "expected incompatible parents";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::IncompatibleParents);
  }
}

TEST(Parse, FieldSpecsRoundTrip) {
  for (const char* spec : {"Q", "F2", "F7", "Q(t)", "Q[s]/(s^2+1)", "F7[s]/(s^2-3)"}) {
    const RingPtr r = parse_field(spec);
    EXPECT_TRUE(same_ring(r, parse_field(r->to_string()))) << spec;
  }
  EXPECT_THROW(parse_field("F4"), Error);
  EXPECT_THROW(parse_field("Q[s]/(s^4+1)"), Error);
}

TEST(Parse, ScalarsPrintAndReparse) {
  const RingPtr K = parse_field("Q[s]/(s^2+1)");
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const Scalar x = rng.scalar(K);
    EXPECT_EQ(parse_scalar(x.to_string(), K), x) << x.to_string();
  }
  EXPECT_THROW(parse_scalar("2 +", K), Error);
  EXPECT_THROW(parse_scalar("y", K), Error);
}

TEST(Rng, SameSeedSameSamples) {
  const RingPtr Q = Ring::rationals();
  Rng a(42), b(42), c(43);
  const Vec va = a.vector(Q, 10), vb = b.vector(Q, 10), vc = c.vector(Q, 10);
  EXPECT_TRUE(vec_equal(va, vb));
  EXPECT_FALSE(vec_equal(va, vc));
}

// Field axioms on random elements, over several rings.
class FieldLaws : public ::testing::TestWithParam<const char*> {};

TEST_P(FieldLaws, DistributiveAssociativeInverse) {
  const RingPtr r = parse_field(GetParam());
  Rng rng(7);
  for (int i = 0; i < 25; ++i) {
    const Scalar a = rng.scalar(r), b = rng.scalar(r), c = rng.scalar(r);
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * b, b * a);
    const Scalar n = rng.nonzero_scalar(r);
    EXPECT_TRUE((n * n.inverse()).is_one());
  }
}

INSTANTIATE_TEST_SUITE_P(Rings, FieldLaws,
                         ::testing::Values("Q", "F2", "F3", "F101", "Q[s]/(s^2+1)", "Q[x]/(x^3-3x-1)",
                                           "F7[s]/(s^2-3)", "Q(t)"));
