#include <albert/rpaths.hpp>

#include <gtest/gtest.h>

#include <sstream>

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

std::string text_of(const RCertificate& c) {
  std::ostringstream os;
  write_certificate(os, c);
  return os.str();
}

RCertificate from_text(const std::string& s) {
  std::istringstream is(s);
  return read_certificate(is);
}

}  // namespace

TEST(Paths, ConjugationPath) {
  First f;
  const RPath p = conj_path(f.j, f.a);
  EXPECT_TRUE(p.multiplier.is_one());
  EXPECT_TRUE(p.automorphism_family());
  EXPECT_TRUE(p.at0.matrix == aut_conj_I(f.j, f.a).matrix);
  EXPECT_TRUE(p.at1.matrix.is_identity());
}

TEST(Paths, SL1PathsOnSeededNormOneElements) {
  First f;
  Rng rng(51);
  for (int i = 0; i < 5; ++i) {
    const Deg3Element d = random_norm_one(rng, f.M);
    const RPath p = sl1_path_split(f.j, d);
    EXPECT_TRUE(p.automorphism_family());
    EXPECT_TRUE(p.at0.matrix == aut_J(f.j, d, JVariant::B).matrix);
    EXPECT_TRUE(p.at1.matrix.is_identity());
  }
}

TEST(Paths, SL1CurveEndpoints) {
  First f;
  const RingPtr kt = path_field(*f.j);
  const Deg3Element d = transvection(f.M, 0, 1, q(3)) * transvection(f.M, 2, 0, q(-1));
  const Deg3Element g = sl1_curve(d, kt);
  EXPECT_TRUE(reduced_norm(g).is_one());
  EXPECT_EQ(make_element(f.M, specialize(Matrix::from_columns({g.c}), q(0)).column(0)), d);
  EXPECT_EQ(make_element(f.M, specialize(Matrix::from_columns({g.c}), q(1)).column(0)), d3_one(f.M));
}

TEST(Paths, StructurePathMultiplier) {
  // a_t = diag(1, 2 - t, 3 - 2t), b_t = diag(1, 1, 6 - 5t).
  First f;
  const RPath p = str_path(f.j, f.a, diag3(f.M, q(1), q(1), q(6)), d3_one(f.M));
  const Scalar t = ratfunc_variable(p.field);
  const auto c = [&](long v) { return Scalar::from_int(p.field, v); };
  EXPECT_EQ(p.multiplier, (c(2) - t) * (c(3) - 2 * t) * (c(6) - 5 * t));
  EXPECT_FALSE(p.automorphism_family());
}

TEST(Paths, CertificationFailures) {
  First f;
  const RingPtr kt = path_field(*f.j);
  const Scalar t = ratfunc_variable(kt);
  const Matrix id = Matrix::identity(kt, 27);
  EXPECT_EQ(code_of([&] { path_certify(f.j, (Scalar::one(kt) / t) * id); }), Errc::PoleAtEndpoint);
  EXPECT_EQ(code_of([&] { path_certify(f.j, (Scalar::one(kt) / (t - 1)) * id); }), Errc::PoleAtEndpoint);
  EXPECT_EQ(code_of([&] { path_certify(f.j, t * id); }), Errc::MultiplierVanishesAtEndpoint);
  Matrix shear = id;
  shear(0, 1) = t;
  EXPECT_EQ(code_of([&] { path_certify(f.j, shear); }), Errc::GenericFiberFailure);
  // A homothety family with nu = (t + 1)^3 is fine.
  EXPECT_EQ(path_certify(f.j, (t + 1) * id).multiplier, (t + 1) * (t + 1) * (t + 1));
}

TEST(Chi, MiddleOperandOracle) {
  // a = (1, 2, 3) as values at the roots 0, 1, -1 of x^3 - x; Lagrange
  // interpolation gives a = 1 - x/2 + 3x^2/2.
  const AlgebraPtr E = Algebra::cubic_etale(kQ, {q(0), q(-1), q(0)});
  const auto j = std::make_shared<FirstTits>(E, q(5));
  const mpq_class v0 = 1, v1 = 2, vm = 3;
  const Deg3Element a = make_element(E, {Scalar::from_rational(kQ, v0), Scalar::from_rational(kQ, (v1 - vm) / 2),
                                         Scalar::from_rational(kQ, (v1 + vm) / 2 - v0)});
  EXPECT_EQ(reduced_norm(a), q(6));
  const Deg3Element z = d3_zero(E, kQ);
  const Vec a00 = j->pack(a, z, z);

  const SimilarityMap literal = chi_map(j, a, ChiMiddle::Literal);
  EXPECT_EQ(literal.multiplier, q(1, 216));
  EXPECT_TRUE(vec_equal(literal.apply(a00), j->pack(make_element(E, vec_scale(q(1, 6), a.c)), z, z)));
  EXPECT_FALSE(vec_equal(literal.apply(a00), j->unit()));

  const SimilarityMap corrected = chi_map(j, a, ChiMiddle::Corrected);
  EXPECT_EQ(corrected.multiplier, q(1, 6));
  EXPECT_TRUE(vec_equal(corrected.apply(a00), j->unit()));
}

TEST(Chi, CorrectedChoiceOnSeededElements) {
  const AlgebraPtr E = Algebra::cubic_etale(kQ, {q(0), q(-1), q(0)});
  const auto j = std::make_shared<FirstTits>(E, q(5));
  const Deg3Element z = d3_zero(E, kQ);
  Rng rng(53);
  for (int i = 0; i < 5; ++i) {
    const Deg3Element a = random_invertible(rng, E);
    const SimilarityMap chi = chi_map(j, a, ChiMiddle::Corrected);
    EXPECT_TRUE(vec_equal(chi.apply(j->pack(a, z, z)), j->unit()));
    EXPECT_EQ(chi.multiplier, reduced_norm(a).inverse());
  }
}

TEST(Chi, NeedsCubicEtale) {
  First f;
  EXPECT_THROW(chi_map(f.j, f.a, ChiMiddle::Corrected), Error);
}

// ---------------------------------------------------------------- certificates

TEST(Certificates, BuildCheckRoundTrip) {
  First f;
  Rng rng(61);
  for (int i = 0; i < 3; ++i) {
    const auto [a, b] = random_equal_norm_pair(rng, f.M);
    const BuiltCertificate built = cert_build_stab(f.j, a, b);
    EXPECT_TRUE(built.target.automorphism);
    const std::string text = text_of(built.cert);
    const RCertificate back = from_text(text);
    EXPECT_EQ(text_of(back), text);
    const CertReport r = cert_check(back, f.j);
    EXPECT_TRUE(r.pass()) << r.to_text();
  }
}

TEST(Certificates, SingleEntryTamperingDetected) {
  First f;
  const BuiltCertificate built = cert_build_stab(f.j, f.a, diag3(f.M, q(6), q(1), q(1)));
  Rng rng(63);
  for (int trial = 0; trial < 12; ++trial) {
    RCertificate c = built.cert;
    const std::size_t r = rng.below(27), col = rng.below(27);
    const std::size_t which = rng.below(c.paths.size() + 1);
    Matrix& m = which == 0 ? c.target : c.paths[which - 1];
    m(r, col) = m(r, col) + Scalar::one(m(r, col).ring());
    EXPECT_FALSE(cert_check(from_text(text_of(c)), f.j).pass()) << "entry " << r << "," << col << " of block " << which;
  }
}

TEST(Certificates, SwappedPathsBreakTheChain) {
  First f;
  RCertificate c = cert_build_stab(f.j, f.a, diag3(f.M, q(6), q(1), q(1))).cert;
  ASSERT_EQ(c.paths.size(), 2u);
  std::swap(c.paths[0], c.paths[1]);
  const CertReport r = cert_check(c, f.j);
  EXPECT_FALSE(r.pass());
  bool mismatch = false;
  for (const auto& chk : r.checks) mismatch = mismatch || chk.detail == "endpoint-chain-mismatch";
  EXPECT_TRUE(mismatch);
}

TEST(Certificates, MalformedFilesAreParseErrors) {
  First f;
  const std::string text = text_of(cert_build_stab(f.j, f.a, diag3(f.M, q(6), q(1), q(1))).cert);
  EXPECT_EQ(code_of([&] { from_text("albert-rcert 2\n" + text.substr(text.find('\n') + 1)); }), Errc::ParseError);
  EXPECT_EQ(code_of([&] { from_text(text.substr(0, text.size() / 2)); }), Errc::ParseError);
  std::string bad = text;
  bad.replace(bad.find("\npath 1\n") + 8, 1, "x");
  try {
    from_text(bad);
    FAIL() << "expected a parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ParseError);
    EXPECT_NE(std::string(e.what()).find("line "), std::string::npos);
  }
}

TEST(Certificates, WrongParentFailsHeader) {
  First f;
  const RCertificate c = cert_build_stab(f.j, f.a, diag3(f.M, q(6), q(1), q(1))).cert;
  const auto other = std::make_shared<FirstTits>(f.M, q(3));
  EXPECT_FALSE(cert_check(c, other).pass());
}
