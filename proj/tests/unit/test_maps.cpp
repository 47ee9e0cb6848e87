#include <albert/maps.hpp>
#include <albert/parse.hpp>

#include <gtest/gtest.h>

using namespace albert;

namespace {

const RingPtr kQ = Ring::rationals();
Scalar q(long n, long d = 1) { return Scalar::from_rational(kQ, mpq_class(n, d)); }

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::Unsupported;
}

struct First {
  AlgebraPtr M = Algebra::matrix3(kQ);
  FirstTitsPtr j = std::make_shared<FirstTits>(M, q(2));
  Deg3Element a = diag3(M, q(1), q(2), q(3));
};

struct Second {
  RingPtr K = parse_field("Q[s]/(s^2+1)");
  AlgebraPtr B = Algebra::matrix3(K);
  InvolutionPtr tau = Involution::conj_transpose(B);
  SecondTitsPtr j = std::make_shared<SecondTits>(tau, d3_one(B), Scalar::one(K));
  Scalar one = Scalar::one(K), i = Scalar::generator(K);
};

}  // namespace

TEST(Certify, BasicSimilarities) {
  First f;
  const SimilarityMap id = identity_map(f.j);
  EXPECT_TRUE(id.automorphism);
  const SimilarityMap h = homothety(f.j, q(2));
  EXPECT_EQ(h.multiplier, q(8));
  EXPECT_FALSE(h.automorphism);
  const Deg3Element z = d3_zero(f.M, kQ);
  const SimilarityMap u = u_similarity(f.j, f.j->pack(f.a, z, z));
  EXPECT_EQ(u.multiplier, q(36));  // N(a)^2 with N((a,0,0)) = 6
}

TEST(Certify, RejectsNonSimilarities) {
  First f;
  Matrix swap = Matrix::identity(kQ, 27);
  swap(0, 0) = q(0);
  swap(1, 1) = q(0);
  swap(0, 1) = q(1);
  swap(1, 0) = q(1);
  EXPECT_EQ(code_of([&] { certify(f.j, swap); }), Errc::NotASimilarity);
  Matrix singular = Matrix::identity(kQ, 27);
  singular(5, 5) = q(0);
  EXPECT_EQ(code_of([&] { certify(f.j, singular); }), Errc::SingularMatrix);
  const Certification c = try_certify(f.j, swap);
  EXPECT_FALSE(c.similarity);
  EXPECT_FALSE(c.map.has_value());
}

TEST(Certify, CompositionAndInverseMultiply) {
  First f;
  const Deg3Element z = d3_zero(f.M, kQ);
  const SimilarityMap u = u_similarity(f.j, f.j->pack(f.a, z, z));
  const SimilarityMap h = homothety(f.j, q(1, 3));
  const SimilarityMap c = compose(u, h);
  EXPECT_EQ(c.multiplier, q(36, 27));
  EXPECT_EQ(certify(f.j, c.matrix).multiplier, c.multiplier);
  const SimilarityMap inv = invert(u);
  EXPECT_EQ(inv.multiplier, q(1, 36));
  EXPECT_TRUE(compose(u, inv).matrix.is_identity());
}

TEST(FirstConstruction, ExtensionAutomorphismsOnSeededPairs) {
  First f;
  Rng rng(41);
  for (int i = 0; i < 10; ++i) {
    const auto [g, h] = random_equal_norm_pair(rng, f.M);
    const SimilarityMap phi = aut_ext_D(f.j, g, h);
    EXPECT_TRUE(phi.automorphism);
    EXPECT_TRUE(phi.multiplier.is_one());
    EXPECT_TRUE(vec_equal(phi.apply(f.j->unit()), f.j->unit()));
  }
  EXPECT_EQ(code_of([&] { aut_ext_D(f.j, f.a, d3_one(f.M)); }), Errc::NormMismatch);
}

TEST(FirstConstruction, StructureMultiplierLaw) {
  // Certified multiplier equals gamma^3 N(a) N(b) on every seeded instance.
  First f;
  Rng rng(43);
  for (int i = 0; i < 10; ++i) {
    const Scalar gamma = rng.nonzero_scalar(kQ);
    const Deg3Element a = random_invertible(rng, f.M), b = random_invertible(rng, f.M);
    const Deg3Element c = inverse(b) * a * random_norm_one(rng, f.M);
    const SimilarityMap s = str_ext_D(f.j, gamma, a, b, c);
    EXPECT_EQ(s.multiplier, gamma * gamma * gamma * reduced_norm(a) * reduced_norm(b));
  }
  EXPECT_EQ(code_of([&] { str_ext_D(f.j, q(1), f.a, d3_one(f.M), d3_one(f.M)); }), Errc::NormConstraintViolated);
}

TEST(FirstConstruction, ConjugationAutomorphism) {
  First f;
  const SimilarityMap phi = aut_conj_I(f.j, f.a);
  EXPECT_TRUE(phi.automorphism);
  EXPECT_THROW(aut_conj_I(f.j, unit_e(f.M, 0, 0)), Error);
}

TEST(FirstConstruction, OnlyOneJMapVariantSurvives) {
  First f;
  const JVariantVerdict v = compare_jmap_variants(f.j, transvection(f.M, 0, 1, q(1)));
  EXPECT_NE(v.a_automorphism, v.b_automorphism);
  EXPECT_TRUE(v.b_automorphism);
  EXPECT_FALSE(v.a.similarity);
  EXPECT_EQ(v.a.failure, Errc::NotASimilarity);
  EXPECT_TRUE(aut_J(f.j, transvection(f.M, 0, 1, q(1)), JVariant::B).automorphism);
  EXPECT_THROW(aut_J(f.j, transvection(f.M, 0, 1, q(1)), JVariant::A), Error);
  EXPECT_EQ(code_of([&] { jmap_matrix(*f.j, f.a, JVariant::B); }), Errc::NotNormOne);
}

TEST(FirstConstruction, VariantBSurvivesOnRandomNormOne) {
  First f;
  Rng rng(47);
  for (int i = 0; i < 5; ++i) EXPECT_TRUE(aut_J(f.j, random_norm_one(rng, f.M), JVariant::B).automorphism);
}

TEST(FirstConstruction, StabilizerFactorization) {
  First f;
  const Deg3Element b = diag3(f.M, q(6), q(1), q(1));
  const SimilarityMap phi = aut_ext_D(f.j, f.a, b);
  const StabFactorization fac = factor_aut_stab_D(f.j, phi, f.a, b);
  EXPECT_TRUE(fac.i_part.automorphism);
  EXPECT_TRUE(fac.j_part.automorphism);
  EXPECT_TRUE(compose(fac.j_part, fac.i_part).matrix == phi.matrix);
}

TEST(SecondConstruction, WorkedExamplesCertify) {
  Second s;
  EXPECT_TRUE(aut_ext_second(s.j, s.i * d3_one(s.B), diag3(s.B, -s.one, s.one, s.one)).automorphism);
  EXPECT_TRUE(aut_stab_second(s.j, diag3(s.B, s.i, -s.i, s.one), d3_one(s.B)).automorphism);
  EXPECT_EQ(str_ext_second(s.j, q(2), d3_one(s.B), d3_one(s.B)).multiplier, q(8));
}

TEST(SecondConstruction, StructureMultiplier) {
  // nu = gamma^3 N(g) conj(N(g)): g = diag(1+i, 1, 2) has N(g) = 2 + 2i.
  Second s;
  const Deg3Element g = diag3(s.B, s.one + s.i, s.one, 2 * s.one);
  const Deg3Element q_elt = diag3(s.B, s.one, s.one, reduced_norm(inverse(s.tau->apply(g)) * g));
  EXPECT_EQ(str_ext_second(s.j, q(3), g, q_elt).multiplier, q(216));
  EXPECT_EQ(str_ext_second(s.j, q(1), diag3(s.B, s.one, 2 * s.one, s.one), d3_one(s.B)).multiplier, q(4));
}

TEST(SecondConstruction, SideConditionsRejected) {
  Second s;
  EXPECT_EQ(code_of([&] { aut_stab_second(s.j, diag3(s.B, s.i, s.one, s.one), d3_one(s.B)); }),
            Errc::NormProductFailure);
  EXPECT_EQ(code_of([&] { aut_stab_second(s.j, diag3(s.B, 2 * s.one, s.one, s.one), d3_one(s.B)); }),
            Errc::MembershipFailure);
  EXPECT_EQ(code_of([&] { aut_ext_second(s.j, diag3(s.B, s.one, s.one, 2 * s.one), d3_one(s.B)); }),
            Errc::NotASimilitude);
  EXPECT_EQ(code_of([&] { str_ext_second(s.j, q(1), diag3(s.B, s.one + s.i, s.one, s.one), d3_one(s.B)); }),
            Errc::BadQNorm);
}
