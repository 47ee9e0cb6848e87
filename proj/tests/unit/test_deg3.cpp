#include <albert/maps.hpp>
#include <albert/parse.hpp>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace albert;

namespace {

const RingPtr kQ = Ring::rationals();
Scalar q(long n, long d = 1) { return Scalar::from_rational(kQ, mpq_class(n, d)); }

Deg3Element random_element(Rng& rng, const AlgebraPtr& a) { return make_element(a, rng.vector(a->base(), a->dim())); }

// Matrix of left multiplication by `a` over the base of the algebra.
std::vector<std::vector<mpq_class>> left_regular(const Deg3Element& a) {
  std::vector<Vec> cols;
  for (std::size_t i = 0; i < a.alg->dim(); ++i)
    cols.push_back((a * make_element(a.alg, unit_vector(a.alg->base(), a.alg->dim(), i))).c);
  return oracle::to_rows(Matrix::from_columns(cols));
}

}  // namespace

TEST(Matrix3, NormTraceAdjointMatchDeterminantOracle) {
  const AlgebraPtr M = Algebra::matrix3(kQ);
  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    const Deg3Element a = random_element(rng, M);
    const oracle::M3 m = oracle::to_m3(a);
    EXPECT_EQ(reduced_norm(a).rational(), oracle::det3(m));
    EXPECT_EQ(reduced_trace(a).rational(), oracle::trace(m));
    EXPECT_EQ(a * sharp(a), d3_central(M, reduced_norm(a)));
  }
}

TEST(Matrix3, InverseAndTransvections) {
  const AlgebraPtr M = Algebra::matrix3(kQ);
  const Deg3Element a = diag3(M, q(1), q(2), q(3));
  EXPECT_EQ(a * inverse(a), d3_one(M));
  EXPECT_TRUE(reduced_norm(transvection(M, 0, 2, q(5))).is_one());
  EXPECT_THROW(inverse(unit_e(M, 0, 1)), Error);
}

TEST(Matrix3, CharacteristicTwo) {
  const AlgebraPtr M = Algebra::matrix3(Ring::prime_field(2));
  Rng rng(3);
  for (int i = 0; i < 10; ++i) {
    const Deg3Element a = random_element(rng, M);
    EXPECT_EQ(a * sharp(a), d3_central(M, reduced_norm(a)));
    EXPECT_EQ(sharp(sharp(a)), reduced_norm(a) * a);
  }
}

TEST(CubicEtale, SplitNormIsProductOfRootValues) {
  // Q[x]/(x^3 - x) = Q x Q x Q via evaluation at 0, 1, -1.
  const AlgebraPtr E = Algebra::cubic_etale(kQ, {q(0), q(-1), q(0)});
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    const Deg3Element a = random_element(rng, E);
    const auto at = [&](long r) -> mpq_class { return a.c[0].rational() + a.c[1].rational() * r + a.c[2].rational() * r * r; };
    EXPECT_EQ(reduced_norm(a).rational(), at(0) * at(1) * at(-1));
    EXPECT_EQ(reduced_trace(a).rational(), at(0) + at(1) + at(-1));
  }
}

TEST(CubicEtale, NormIsRegularDeterminant) {
  const AlgebraPtr E = Algebra::cubic_etale(kQ, {q(-1), q(-3), q(0)});
  Rng rng(5);
  for (int i = 0; i < 10; ++i) {
    const Deg3Element a = random_element(rng, E);
    EXPECT_EQ(reduced_norm(a).rational(), oracle::det_leibniz(left_regular(a)));
  }
}

TEST(CubicEtale, InseparableCubicRejected) {
  const RingPtr F3 = Ring::prime_field(3);
  EXPECT_THROW(Algebra::cubic_etale(F3, {Scalar::from_int(F3, 1), Scalar::zero(F3), Scalar::zero(F3)}), Error);
}

TEST(Cyclic, RegularDeterminantIsNormCubed) {
  const RingPtr L = parse_field("Q[x]/(x^3-3x-1)");
  for (int index : {1, 2}) {
    const AlgebraPtr C = Algebra::cyclic(L, Algebra::cyclic_generator_image(L, index), q(2));
    Rng rng(6 + index);
    for (int i = 0; i < 5; ++i) {
      const Deg3Element a = random_element(rng, C);
      const mpq_class n = reduced_norm(a).rational();
      EXPECT_EQ(oracle::det_gauss(left_regular(a)), n * n * n);
      EXPECT_EQ(a * sharp(a), d3_central(C, reduced_norm(a)));
    }
  }
}

TEST(Cyclic, RhoHasOrderThree) {
  const RingPtr L = parse_field("Q[x]/(x^3-3x-1)");
  const Scalar r1 = Algebra::cyclic_generator_image(L, 1);
  const Scalar r2 = Algebra::cyclic_generator_image(L, 2);
  const Scalar x = Scalar::generator(L);
  EXPECT_FALSE(r1 == x);
  EXPECT_FALSE(r1 == r2);
  EXPECT_EQ(x + r1 + r2, Scalar::zero(L));  // sum of the roots of x^3 - 3x - 1
}

TEST(ProdOp, NormIsComponentPair) {
  const AlgebraPtr M = Algebra::matrix3(kQ);
  const AlgebraPtr B = Algebra::prodop(M);
  Rng rng(9);
  for (int i = 0; i < 10; ++i) {
    const Deg3Element x = random_element(rng, M), y = random_element(rng, M);
    const auto [n1, n2] = split_components(reduced_norm(pair_element(B, x, y)));
    EXPECT_EQ(n1, reduced_norm(x));
    EXPECT_EQ(n2, reduced_norm(y));
    // The second factor is the opposite algebra.
    const auto [p1, p2] = pair_components(pair_element(B, x, x) * pair_element(B, y, y));
    EXPECT_EQ(p1, x * y);
    EXPECT_EQ(p2, y * x);
  }
}

TEST(Involutions, SecondKindAntiAutomorphisms) {
  const RingPtr K = parse_field("Q[s]/(s^2+1)");
  const AlgebraPtr B = Algebra::matrix3(K);
  const AlgebraPtr P = Algebra::prodop(Algebra::matrix3(kQ));
  const InvolutionPtr tau = Involution::conj_transpose(B);
  const InvolutionPtr tw = Involution::utwist(tau, diag3(B, Scalar::one(K), Scalar::one(K), Scalar::from_int(K, 2)));
  for (const auto& sigma : {tau, tw, Involution::switch_involution(P)}) {
    const AlgebraPtr& a = sigma->algebra();
    Rng rng(12);
    for (int i = 0; i < 8; ++i) {
      const Deg3Element x = random_element(rng, a), y = random_element(rng, a);
      EXPECT_EQ(sigma->apply(x * y), sigma->apply(y) * sigma->apply(x));
      EXPECT_EQ(sigma->apply(sigma->apply(x)), x);
    }
    const Scalar kappa = rng.scalar(a->norm_ring());
    EXPECT_EQ(sigma->apply(d3_central(a, kappa)), d3_central(a, center_conj(kappa)));
  }
}

TEST(Involutions, TwistNeedsSymmetricUnit) {
  const RingPtr K = parse_field("Q[s]/(s^2+1)");
  const AlgebraPtr B = Algebra::matrix3(K);
  const InvolutionPtr tau = Involution::conj_transpose(B);
  EXPECT_THROW(Involution::utwist(tau, unit_e(B, 0, 1) + d3_one(B)), Error);
  EXPECT_THROW(Involution::conj_transpose(Algebra::matrix3(kQ)), Error);
}

TEST(Groups, Membership) {
  const RingPtr K = parse_field("Q[s]/(s^2+1)");
  const AlgebraPtr B = Algebra::matrix3(K);
  const InvolutionPtr tau = Involution::conj_transpose(B);
  const Scalar i = Scalar::generator(K), one = Scalar::one(K);
  EXPECT_TRUE(membership(diag3(B, i, -i, one), Group::U, tau).member);
  EXPECT_TRUE(membership(diag3(B, i, -i, one), Group::SU, tau).member);
  EXPECT_FALSE(membership(diag3(B, i, one, one), Group::SU, tau).member);
  const MembershipResult sim = membership(Scalar::from_int(K, 3) * d3_one(B), Group::Sim, tau);
  ASSERT_TRUE(sim.member);
  EXPECT_EQ(*sim.witness, Scalar::from_int(sim.witness->ring(), 9));
  EXPECT_THROW(membership(d3_one(B), Group::U), Error);
}

TEST(Transvections, FactorizationReproducesNormOneMatrices) {
  const AlgebraPtr M = Algebra::matrix3(kQ);
  Rng rng(21);
  std::vector<Deg3Element> cases{diag3(M, q(2), q(1, 2), q(1)), diag3(M, q(-1), q(-1), q(1)),
                                 unit_e(M, 0, 1) + unit_e(M, 1, 2) + unit_e(M, 2, 0)};
  for (int i = 0; i < 10; ++i) cases.push_back(random_norm_one(rng, M, 4));
  for (const auto& d : cases) {
    const auto factors = transvection_factorization(d);
    for (const auto& f : factors) EXPECT_NE(f.i, f.j);
    EXPECT_EQ(transvection_product(M, factors), d);
  }
  EXPECT_THROW(transvection_factorization(diag3(M, q(2), q(1), q(1))), Error);
}
