#include <albert/maps.hpp>
#include <albert/parse.hpp>

#include <gtest/gtest.h>

#include "oracles.hpp"

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

SuiteOptions options(std::uint64_t seed, std::size_t samples = 4) {
  SuiteOptions o;
  o.seed = seed;
  o.samples = samples;
  return o;
}

}  // namespace

TEST(FirstTits, NormMatchesOracleFormula) {
  const AlgebraPtr M = Algebra::matrix3(kQ);
  const mpq_class lambda(2);
  const FirstTits j(M, q(2));
  Rng rng(31);
  for (int i = 0; i < 10; ++i) {
    const Deg3Element x = make_element(M, rng.vector(kQ, 9)), y = make_element(M, rng.vector(kQ, 9)),
                      z = make_element(M, rng.vector(kQ, 9));
    const auto X = oracle::to_m3(x), Y = oracle::to_m3(y), Z = oracle::to_m3(z);
    const mpq_class expected = oracle::det3(X) + lambda * oracle::det3(Y) + oracle::det3(Z) / lambda -
                               oracle::trace(oracle::mul(oracle::mul(X, Y), Z));
    EXPECT_EQ(j.norm(j.pack(x, y, z)).rational(), expected);
  }
}

TEST(FirstTits, FrozenNormValue) {
  // x = diag(1,2,3), y = 1 + e_12, z = e_21: x y z = e_11 + 2 e_21, so
  // N = N(x) + 2 N(y) + N(z)/2 - T(x y z) = 6 + 2 + 0 - 1.
  const AlgebraPtr M = Algebra::matrix3(kQ);
  const FirstTits j(M, q(2));
  const Vec v = j.pack(diag3(M, q(1), q(2), q(3)), transvection(M, 0, 1, q(1)), unit_e(M, 1, 0));
  EXPECT_EQ(j.norm(v), q(7));
}

TEST(FirstTits, UnitAndSharpOfUnit) {
  const FirstTits j(Algebra::matrix3(kQ), q(2));
  EXPECT_EQ(j.norm(j.unit()), q(1));
  EXPECT_TRUE(vec_equal(j.sharp(j.unit()), j.unit()));
  EXPECT_EQ(j.dim(), 27u);
  EXPECT_EQ(j.describe(), "first_tits(matrix3(Q), lambda=2)");
}

TEST(FirstTits, RejectsZeroLambdaAndProdOp) {
  const AlgebraPtr M = Algebra::matrix3(kQ);
  EXPECT_EQ(code_of([&] { FirstTits(M, q(0)); }), Errc::ZeroLambda);
  const RingPtr F3 = Ring::prime_field(3);
  EXPECT_EQ(code_of([&] { FirstTits(Algebra::matrix3(F3), Scalar::from_int(F3, 3)); }), Errc::ZeroLambda);
  EXPECT_EQ(code_of([&] { FirstTits(Algebra::prodop(M), q(1)); }), Errc::Unsupported);
}

TEST(FirstTits, DivisionAssertionIsMetadataOnly) {
  const FirstTits j(Algebra::matrix3(kQ), q(2), true);
  ASSERT_TRUE(j.division_asserted().has_value());
  EXPECT_TRUE(*j.division_asserted());
  EXPECT_TRUE(axiom_suite(j, options(1, 2)).all_pass());
}

class FirstTitsFields : public ::testing::TestWithParam<std::pair<long, long>> {};

TEST_P(FirstTitsFields, AxiomSuitePasses) {
  const auto [p, lambda] = GetParam();
  const RingPtr k = p ? Ring::prime_field(p) : kQ;
  const FirstTits j(Algebra::matrix3(k), Scalar::from_int(k, lambda));
  const AxiomReport r = axiom_suite(j, options(5));
  EXPECT_TRUE(r.all_pass()) << r.to_text();
}

INSTANTIATE_TEST_SUITE_P(Characteristics, FirstTitsFields,
                         ::testing::Values(std::pair{0L, 2L}, std::pair{2L, 1L}, std::pair{3L, 2L}, std::pair{5L, 3L},
                                           std::pair{0L, -7L}));

TEST(FirstTits, EmbeddedFirstSummandIsDPlus) {
  const AlgebraPtr M = Algebra::matrix3(kQ);
  const auto j = std::make_shared<FirstTits>(M, q(3));
  const Matrix e = embed_first_summand(*j);
  std::vector<Vec> basis;
  for (std::size_t i = 0; i < e.cols(); ++i) basis.push_back(e.column(i));
  const RestrictedJordan sub(j, basis);
  const DPlus d(M);
  Rng rng(33);
  for (int i = 0; i < 5; ++i) {
    const Vec x = rng.vector(kQ, 9);
    EXPECT_EQ(sub.norm(x), d.norm(x));
    EXPECT_TRUE(vec_equal(sub.sharp(x), d.sharp(x)));
  }
}

// ---------------------------------------------------------------- second construction

namespace {

struct Gaussian {
  RingPtr K = parse_field("Q[s]/(s^2+1)");
  AlgebraPtr B = Algebra::matrix3(K);
  InvolutionPtr tau = Involution::conj_transpose(B);
  Scalar one = Scalar::one(K), i = Scalar::generator(K);
};

}  // namespace

TEST(SecondTits, DimensionsAndCoordinates) {
  Gaussian g;
  const SecondTits j(g.tau, d3_one(g.B), g.one);
  EXPECT_EQ(j.dim(), 27u);
  EXPECT_EQ(j.hermitian_basis().size(), 9u);
  EXPECT_TRUE(same_ring(j.base_ring(), kQ));
  const Deg3Element h = diag3(g.B, g.one, 2 * g.one, 3 * g.one) + g.i * unit_e(g.B, 0, 1) - g.i * unit_e(g.B, 1, 0);
  const Deg3Element x = g.i * unit_e(g.B, 2, 0) + d3_one(g.B);
  const auto [b2, x2] = j.unpack(j.pack(h, x));
  EXPECT_EQ(b2, h);
  EXPECT_EQ(x2, x);
  EXPECT_THROW(j.pack(unit_e(g.B, 0, 1), x), Error);  // not hermitian
  EXPECT_EQ(j.norm(j.unit()), q(1));
}

TEST(SecondTits, AxiomSuitePasses) {
  Gaussian g;
  const SecondTits j(g.tau, d3_one(g.B), g.one);
  const AxiomReport r = axiom_suite(j, options(6));
  EXPECT_TRUE(r.all_pass()) << r.to_text();
}

TEST(SecondTits, GeneralAdmissiblePair) {
  // u = diag(1,1,2) is tau-hermitian with N(u) = 2 = (1+i)(1-i).
  Gaussian g;
  const Deg3Element u = diag3(g.B, g.one, g.one, 2 * g.one);
  const InvolutionPtr sigma = Involution::utwist(g.tau, u);
  const SecondTits j(sigma, u, g.one + g.i);
  EXPECT_TRUE(axiom_suite(j, options(7, 3)).all_pass());
}

TEST(SecondTits, InadmissiblePairsRejected) {
  Gaussian g;
  EXPECT_EQ(code_of([&] { SecondTits(g.tau, d3_one(g.B), 2 * g.one); }), Errc::InadmissiblePair);
  EXPECT_EQ(code_of([&] { SecondTits(g.tau, g.i * d3_one(g.B), g.one); }), Errc::InadmissiblePair);  // tau(u) != u
  EXPECT_EQ(code_of([&] { SecondTits(g.tau, d3_zero(g.B, g.K), Scalar::zero(g.K)); }), Errc::InadmissiblePair);
  try {
    SecondTits(g.tau, d3_one(g.B), 2 * g.one);
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("mu conj(mu)"), std::string::npos);
  }
}

TEST(SecondTits, NeedsQuadraticCenter) {
  const AlgebraPtr M = Algebra::matrix3(kQ);
  EXPECT_THROW(Involution::conj_transpose(M), Error);
}

TEST(SplitIdentification, MatrixAndEtale) {
  const RingPtr S = Ring::split_quadratic(kQ);
  for (const AlgebraPtr& d : {Algebra::matrix3(kQ), Algebra::cubic_etale(kQ, {q(0), q(-1), q(0)})}) {
    const SplitIdentification s = split_identify(d, split_from_components(S, q(2), q(1, 2)));
    EXPECT_TRUE(s.norm_preserved);
    EXPECT_TRUE(s.unit_preserved);
    EXPECT_EQ(s.target->lambda(), q(2));
    EXPECT_TRUE((s.forward * s.backward).is_identity());
  }
}

TEST(SplitIdentification, RejectsMuNotOfTheForm) {
  const RingPtr S = Ring::split_quadratic(kQ);
  const AlgebraPtr M = Algebra::matrix3(kQ);
  // (2, 3): N(1) = 1 != 6 = mu conj(mu).
  EXPECT_EQ(code_of([&] { split_identify(M, split_from_components(S, q(2), q(3))); }), Errc::InadmissiblePair);
}

TEST(SplitIdentification, SourceSatisfiesAxioms) {
  const RingPtr S = Ring::split_quadratic(kQ);
  const SplitIdentification s = split_identify(Algebra::matrix3(kQ), split_from_components(S, q(-3), q(-1, 3)));
  EXPECT_TRUE(axiom_suite(*s.source, options(8, 3)).all_pass());
}
