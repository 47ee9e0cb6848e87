#pragma once

// Norm similarities with certified multipliers, and constructors for the
// explicit automorphism and similarity families of the Tits constructions.
// Every constructor builds a matrix and hands it to certify(); none sets a
// multiplier by fiat.

#include <albert/tits.hpp>

namespace albert {

struct SimilarityMap {
  JordanPtr parent;
  Matrix matrix;        // columns are images of the standard basis
  Scalar multiplier;    // N(f(X)) = multiplier N(X) in generic coordinates
  bool automorphism = false;  // multiplier 1 and f(c) = c
  std::string name;

  Vec apply(const Vec& x) const { return matrix.apply(x); }
};

// Throws SingularMatrix or NotASimilarity.
SimilarityMap certify(const JordanPtr& j, const Matrix& m, std::string name = "");

// Non-throwing certification used for variant comparison and reports.
struct Certification {
  bool similarity = false;
  std::optional<SimilarityMap> map;
  Errc failure = Errc::NotASimilarity;  // SingularMatrix or NotASimilarity
  std::string detail;                    // why certification failed
};
Certification try_certify(const JordanPtr& j, const Matrix& m, std::string name = "");

// Matrix of a linear map given on vectors.
Matrix matrix_of(const CubicJordan& j, const std::function<Vec(const Vec&)>& f);

SimilarityMap identity_map(const JordanPtr& j);
SimilarityMap homothety(const JordanPtr& j, const Scalar& alpha);
// U_a; throws NotInvertible unless N(a) is a unit.
SimilarityMap u_similarity(const JordanPtr& j, const Vec& a);

// ---------------------------------------------------------------- first construction

// (x, y, z) -> (d x d^{-1}, d y d^{-1}, d z d^{-1}).
SimilarityMap aut_conj_I(const FirstTitsPtr& j, const Deg3Element& d);

enum class JVariant {
  A,  // (x, y c, c^{-1} z c)
  B,  // (x, y p, p^{-1} z)
};
std::string_view jvariant_name(JVariant v);
// Requires N_D(c) = 1 (NotNormOne).
Matrix jmap_matrix(const FirstTits& j, const Deg3Element& c, JVariant variant);
// Certifies the chosen variant; throws NotASimilarity or InvalidAutomorphism
// when it is not an automorphism.
SimilarityMap aut_J(const FirstTitsPtr& j, const Deg3Element& c, JVariant variant);

struct JVariantVerdict {
  Certification a, b;
  bool a_automorphism = false, b_automorphism = false;
};
JVariantVerdict compare_jmap_variants(const FirstTitsPtr& j, const Deg3Element& c);

// (g x g^{-1}, g y h^{-1}, h z g^{-1}) for N_D(g) = N_D(h).
SimilarityMap aut_ext_D(const FirstTitsPtr& j, const Deg3Element& g, const Deg3Element& h);
// gamma (a x b, b^# y c, c^{-1} z a^#) for N_D(a) = N_D(b) N_D(c).
SimilarityMap str_ext_D(const FirstTitsPtr& j, const Scalar& gamma, const Deg3Element& a, const Deg3Element& b,
                        const Deg3Element& c);

// phi = J_{a b^{-1}} I_a for phi = (a x a^{-1}, a y b^{-1}, b z a^{-1}).
struct StabFactorization {
  SimilarityMap i_part, j_part;
};
StabFactorization factor_aut_stab_D(const FirstTitsPtr& j, const SimilarityMap& phi, const Deg3Element& a,
                                    const Deg3Element& b);

// ---------------------------------------------------------------- second construction

// (b, x) -> (g b g^{-1}, lambda^{-1} sigma(g)^# x q) for g in Sim(B, sigma)
// with g sigma(g) = lambda, q in U(B, sigma_u) and N_B(q) = conj(nu)^{-1} nu,
// nu = N_B(g).
SimilarityMap aut_ext_second(const SecondTitsPtr& j, const Deg3Element& g, const Deg3Element& q);
// (b, x) -> (p b p^{-1}, p x q) for p in U(B, sigma), q in U(B, sigma_u),
// N_B(p) N_B(q) = 1.
SimilarityMap aut_stab_second(const SecondTitsPtr& j, const Deg3Element& p, const Deg3Element& q);
// gamma (g b sigma(g), sigma(g)^# x q) for q in U(B, sigma_u) with
// N_B(q) = N_B(sigma(g)^{-1} g).
SimilarityMap str_ext_second(const SecondTitsPtr& j, const Scalar& gamma, const Deg3Element& g,
                             const Deg3Element& q);

// ---------------------------------------------------------------- group operations

// f o g; multiplier nu(f) nu(g).
SimilarityMap compose(const SimilarityMap& f, const SimilarityMap& g);
SimilarityMap invert(const SimilarityMap& f);

// ---------------------------------------------------------------- sampling

// Product of `factors` random transvections E_ij(alpha), i != j: norm one.
Deg3Element random_norm_one(Rng& rng, const AlgebraPtr& matrix3, std::size_t factors = 3);
// Random invertible element (resampled until N is a unit).
Deg3Element random_invertible(Rng& rng, const AlgebraPtr& alg);
// (g, g s) with s = random_norm_one, so N(g) = N(g s).
std::pair<Deg3Element, Deg3Element> random_equal_norm_pair(Rng& rng, const AlgebraPtr& matrix3);

}  // namespace albert
