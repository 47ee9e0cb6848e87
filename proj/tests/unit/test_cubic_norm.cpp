#include <albert/maps.hpp>
#include <albert/parse.hpp>

#include <gtest/gtest.h>

using namespace albert;

namespace {

const RingPtr kQ = Ring::rationals();
Scalar q(long n, long d = 1) { return Scalar::from_rational(kQ, mpq_class(n, d)); }

SuiteOptions options(std::uint64_t seed, std::size_t samples = 6) {
  SuiteOptions o;
  o.seed = seed;
  o.samples = samples;
  return o;
}

}  // namespace

class DPlusSuite : public ::testing::TestWithParam<int> {
 protected:
  AlgebraPtr algebra() const {
    switch (GetParam()) {
      case 0: return Algebra::matrix3(kQ);
      case 1: return Algebra::matrix3(Ring::prime_field(2));
      case 2: return Algebra::cubic_etale(kQ, {q(0), q(-1), q(0)});
      default: {
        const RingPtr L = parse_field("Q[x]/(x^3-3x-1)");
        return Algebra::cyclic(L, Algebra::cyclic_generator_image(L, 1), q(2));
      }
    }
  }
};

TEST_P(DPlusSuite, AxiomsHold) {
  const DPlus j(algebra());
  const AxiomReport r = axiom_suite(j, options(3));
  EXPECT_TRUE(r.all_pass()) << r.to_text();
  EXPECT_EQ(r.checks.size(), 6u);
}

TEST_P(DPlusSuite, DegreeIdentities) {
  const DPlus j(algebra());
  EXPECT_TRUE(degree_identity_u(j).pass);
  EXPECT_TRUE(degree_identity_sharp(j).pass);
}

TEST_P(DPlusSuite, TraceFormMatchesReducedTracePairing) {
  EXPECT_TRUE(trace_form_oracle(algebra(), 15, 8).pass);
}

INSTANTIATE_TEST_SUITE_P(Algebras, DPlusSuite, ::testing::Range(0, 4));

TEST(Derived, UOperatorOnDPlusIsTwoSidedProduct) {
  // For D_+ of an associative algebra, U_x y = x y x.
  const AlgebraPtr M = Algebra::matrix3(kQ);
  const DPlus j(M);
  Rng rng(17);
  for (int i = 0; i < 10; ++i) {
    const Deg3Element x = make_element(M, rng.vector(kQ, 9)), y = make_element(M, rng.vector(kQ, 9));
    EXPECT_TRUE(vec_equal(u_op(j, x.c, y.c), (x * y * x).c));
    EXPECT_TRUE(vec_equal(u_matrix(j, x.c).apply(y.c), (x * y * x).c));
  }
}

TEST(Derived, TraceAndUnit) {
  const DPlus j(Algebra::matrix3(kQ));
  EXPECT_EQ(trace_linear(j, j.unit()), q(3));
  EXPECT_TRUE(u_matrix(j, j.unit()).is_identity());
  EXPECT_TRUE(nondegenerate(j));
}

TEST(Derived, JordanInverse) {
  const auto j = std::make_shared<FirstTits>(Algebra::matrix3(kQ), q(2));
  Rng rng(19);
  for (int i = 0; i < 5; ++i) {
    const Vec x = rng.vector(kQ, 27);
    if (j->norm(x).is_zero()) continue;
    const Vec xi = jordan_inverse(*j, x);
    EXPECT_TRUE(vec_equal(u_op(*j, x, xi), x));
    EXPECT_EQ(j->norm(x) * j->norm(xi), q(1));
  }
  const AlgebraPtr M = Algebra::matrix3(kQ);
  const Deg3Element z = d3_zero(M, kQ);
  EXPECT_THROW(jordan_inverse(*j, j->pack(unit_e(M, 0, 0), z, z)), Error);
}

TEST(BrokenStructures, AxiomFiveCatchesScaledSharp) {
  const auto d = std::make_shared<DPlus>(Algebra::matrix3(kQ));
  const FunctionalJordan bad(
      kQ, d->unit(), [d](const Vec& x) { return d->norm(x); },
      [d](const Vec& x) { return vec_scale(Scalar::from_int(x.front().ring(), 2), d->sharp(x)); }, "scaled sharp");
  const AxiomReport r = axiom_suite(bad, options(1));
  EXPECT_FALSE(r.all_pass());
  ASSERT_NE(r.find("axiom-5"), nullptr);
  EXPECT_FALSE(r.find("axiom-5")->pass);
  EXPECT_NE(r.find("axiom-5")->detail.find("counterexample"), std::string::npos);
}

TEST(BrokenStructures, SymbolicCheckCatchesWhatSamplesMiss) {
  // With zero samples only the generic-coordinate check runs; a quartic
  // perturbation of one coordinate of # must still be caught.
  const auto d = std::make_shared<DPlus>(Algebra::matrix3(kQ));
  const FunctionalJordan bad(
      kQ, d->unit(), [d](const Vec& x) { return d->norm(x); },
      [d](const Vec& x) {
        Vec s = d->sharp(x);
        s[4] = s[4] + x[1] * x[2] * x[3] * x[5];
        return s;
      },
      "perturbed sharp");
  SuiteOptions o = options(1, 0);
  const AxiomReport r = axiom_suite(bad, o);
  EXPECT_FALSE(r.find("axiom-5")->pass);
  EXPECT_EQ(r.find("axiom-5")->mode, "sampled+symbolic");
}

TEST(BrokenStructures, NonUnitBasePoint) {
  const auto d = std::make_shared<DPlus>(Algebra::matrix3(kQ));
  Vec c = d->unit();
  c[0] = q(2);
  const FunctionalJordan bad(kQ, c, [d](const Vec& x) { return d->norm(x); }, [d](const Vec& x) { return d->sharp(x); },
                             "bad base point");
  const AxiomReport r = axiom_suite(bad, options(1, 2));
  EXPECT_FALSE(r.find("axiom-2")->pass);
}

TEST(Subspaces, ClosureAndFixedSpace) {
  const auto j = std::make_shared<DPlus>(Algebra::matrix3(kQ));
  const AlgebraPtr& M = j->algebra();
  EXPECT_EQ(subalgebra_closure(*j, {}).size(), 1u);
  const auto diag = subalgebra_closure(*j, {diag3(M, q(1), q(2), q(3)).c});
  EXPECT_EQ(diag.size(), 3u);
  EXPECT_TRUE(in_span(diag, {diag3(M, q(5), q(0), q(-1)).c}));
  EXPECT_FALSE(in_span(diag, {unit_e(M, 0, 1).c}));

  const RestrictedJordan sub(j, diag);
  EXPECT_TRUE(axiom_suite(sub, options(2)).all_pass());

  // Fixed points of conjugation by diag(1, 1, 2): the block-diagonal matrices.
  const Deg3Element g = diag3(M, q(1), q(1), q(2));
  const Matrix f = matrix_of(*j, [&](const Vec& x) { return (g * make_element(M, x) * inverse(g)).c; });
  const FixedSpace fs = fixed_subspace(*j, f);
  EXPECT_EQ(fs.basis.size(), 5u);
  EXPECT_TRUE(fs.sharp_closed);
}

TEST(FirstTitsSuite, EtaleConstructionPassesEverything) {
  const auto j = std::make_shared<FirstTits>(Algebra::cubic_etale(kQ, {q(0), q(-1), q(0)}), q(5));
  EXPECT_TRUE(axiom_suite(*j, options(4)).all_pass());
  EXPECT_TRUE(fundamental_formula(*j, 10, 4).pass);
  EXPECT_TRUE(degree_identity_u(*j).pass);
  EXPECT_TRUE(degree_identity_sharp(*j).pass);
}

TEST(FirstTitsSuite, SameSeedSameReport) {
  const auto j = std::make_shared<FirstTits>(Algebra::matrix3(kQ), q(2));
  EXPECT_EQ(axiom_suite(*j, options(9, 3)).to_text(), axiom_suite(*j, options(9, 3)).to_text());
  SuiteOptions par = options(9, 3);
  par.parallel = true;
  EXPECT_EQ(axiom_suite(*j, options(9, 3)).to_text(), axiom_suite(*j, par).to_text());
}
