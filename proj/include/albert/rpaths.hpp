#pragma once

// One-parameter families of norm similarities over k(t), the explicit path
// families connecting automorphisms of a first construction to the identity,
// and R-equivalence certificates with a checker that trusts only the file.

#include <albert/maps.hpp>

#include <iosfwd>

namespace albert {

// A matrix over k(t) certified to be a similarity of the generic fiber and
// regular, with invertible multiplier, at t = 0 and t = 1.
struct RPath {
  JordanPtr parent;
  RingPtr field;        // k(t)
  Matrix matrix;        // entries in k(t)
  Scalar multiplier;    // nu(t) in k(t)
  SimilarityMap at0, at1;
  std::string name;

  bool automorphism_family() const;  // nu = 1 identically and f(t) c = c
};

// k(t) with variable "t" over the base ring of `j`.
RingPtr path_field(const CubicJordan& j);
// Entrywise specialization t -> t0; throws PoleAtPoint.
Matrix specialize(const Matrix& m, const Scalar& t0);

// Throws GenericFiberFailure, PoleAtEndpoint or MultiplierVanishesAtEndpoint.
RPath path_certify(const JordanPtr& j, const Matrix& m, std::string name = "");

// theta(t): conjugation by a_t = (1 - t) a + t on all three summands.
RPath conj_path(const FirstTitsPtr& j, const Deg3Element& a);
// gamma(t) = prod E_ij((1 - t) alpha) over the transvection factorization of
// d; gamma(0) = d, gamma(1) = 1, N(gamma(t)) = 1.
Deg3Element sl1_curve(const Deg3Element& d, const RingPtr& kt);
// t -> J-map of gamma(t) in the given variant.
RPath sl1_path_split(const FirstTitsPtr& j, const Deg3Element& d, JVariant variant = JVariant::B);
// (a_t x b_t, b_t^# y c_t, c_t^{-1} z a_t^#) with a_t = (1 - t) a + t,
// b_t = (1 - t) b + t, c_t = a_t b_t^{-1} gamma(t); at t = 0 this is
// str_ext_D(1, a, b, a b^{-1} d).
RPath str_path(const FirstTitsPtr& j, const Deg3Element& a, const Deg3Element& b, const Deg3Element& d);

// chi = R_{N(a)} U_{(0,0,1)} U_{(0,m,0)} on J(E, lambda) for cubic etale E,
// with m = N(a)^{-1} (literal) or m = N(a)^{-1} a (corrected).
enum class ChiMiddle { Literal, Corrected };
std::string_view chi_middle_name(ChiMiddle m);
SimilarityMap chi_map(const FirstTitsPtr& j, const Deg3Element& a, ChiMiddle middle);

// ---------------------------------------------------------------- certificates

struct RCertificate {
  std::string field;         // field spec of k
  std::string construction;  // construction descriptor of the parent
  std::size_t dim = 0;
  Matrix target;              // over k
  std::vector<Matrix> paths;  // over k(t), read from target to identity
};

// Chain f_1(0) = phi, f_i(1) = f_{i+1}(0), f_last(1) = 1 for
// phi = (a x a^{-1}, a y b^{-1}, b z a^{-1}): f_1 = J_{ab^{-1}} theta(t),
// f_2 = the SL(1) path of a b^{-1}. Needs matrix3 coordinates.
struct BuiltCertificate {
  RCertificate cert;
  SimilarityMap target;
  std::vector<RPath> paths;
};
BuiltCertificate cert_build_stab(const FirstTitsPtr& j, const Deg3Element& a, const Deg3Element& b);

struct CertReport {
  std::vector<CheckResult> checks;
  bool pass() const;
  std::string to_text() const;
};
// Re-certifies every path and the chain against `j`, which the caller
// resolves from cert.construction.
CertReport cert_check(const RCertificate& cert, const JordanPtr& j);

void write_certificate(std::ostream& os, const RCertificate& cert);
// Throws ParseError with the offending line number.
RCertificate read_certificate(std::istream& is);

}  // namespace albert
