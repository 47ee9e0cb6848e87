#pragma once

// Degree-3 associative algebras: cubic etale algebras, 3x3 matrices, cyclic
// algebras (L/k, rho, b) and products D x D^op, with their reduced
// characteristic data, adjoints, inverses, involutions and group membership.
//
// An algebra is described over a ring R (its "base"). Elements carry a
// coordinate vector whose entries may live in any ring into which R embeds,
// so the same formulas evaluate at generic (polynomial) or one-parameter
// (rational-function) points.

#include <albert/matrix.hpp>

#include <memory>
#include <optional>
#include <string>

namespace albert {

enum class AlgebraKind { CubicEtale, Matrix3, Cyclic, ProdOp };

class Algebra;
using AlgebraPtr = std::shared_ptr<const Algebra>;

class Algebra {
 public:
  // k[x]/(x^3 + c2 x^2 + c1 x + c0) with `lower` = {c0, c1, c2}; the cubic
  // must be separable.
  static AlgebraPtr cubic_etale(const RingPtr& k, std::vector<Scalar> lower, std::string gen = "x");
  static AlgebraPtr matrix3(const RingPtr& r);
  // (L/k, rho, b) with L a cubic extension ring of k, rho the k-automorphism
  // of L sending the generator to `rho_image`, and b a nonzero scalar of k.
  static AlgebraPtr cyclic(const RingPtr& l, const Scalar& rho_image, const Scalar& b);
  static AlgebraPtr prodop(const AlgebraPtr& inner);

  // Image of the generator of L under rho^index (index 1 or 2), read off the
  // factorization of the cubic over L. Needs characteristic != 2 and a
  // square discriminant.
  static Scalar cyclic_generator_image(const RingPtr& l, int index);

  AlgebraKind kind() const { return kind_; }
  const RingPtr& base() const { return base_; }
  std::size_t dim() const;
  // Ring receiving reduced norms and traces at base-level points: the base
  // for matrix3, k for cubic etale and cyclic, k x k (split) for prodop.
  RingPtr norm_ring() const;

  const RingPtr& etale() const { return etale_; }        // L for cubic-etale and cyclic
  const Matrix& rho() const { return rho_; }             // rho on L in the basis 1, x, x^2
  const Scalar& cyclic_b() const { return b_; }
  const AlgebraPtr& inner() const { return inner_; }

  std::string to_string() const;

 private:
  Algebra() = default;

  AlgebraKind kind_ = AlgebraKind::Matrix3;
  RingPtr base_;
  RingPtr etale_;
  Matrix rho_;
  Scalar b_;
  AlgebraPtr inner_;
  RingPtr split_;  // prodop: k x k
};

struct Deg3Element {
  AlgebraPtr alg;
  Vec c;

  RingPtr ring() const;  // common ring of the coordinates
};

// Builds an element, coercing coordinates to a common ring containing the
// algebra's base.
Deg3Element make_element(const AlgebraPtr& alg, Vec coords);
Deg3Element d3_zero(const AlgebraPtr& alg, const RingPtr& ring);
Deg3Element d3_one(const AlgebraPtr& alg, const RingPtr& ring);
Deg3Element d3_one(const AlgebraPtr& alg);
// Element s * 1 for s in the base change of the norm ring (k x k for prodop).
Deg3Element d3_central(const AlgebraPtr& alg, const Scalar& s);

Deg3Element operator+(const Deg3Element& a, const Deg3Element& b);
Deg3Element operator-(const Deg3Element& a, const Deg3Element& b);
Deg3Element operator-(const Deg3Element& a);
Deg3Element operator*(const Deg3Element& a, const Deg3Element& b);
// Scalar multiplication; for prodop, a k x k scalar (alpha, beta) acts as
// (alpha x, beta y) and a k scalar acts diagonally.
Deg3Element operator*(const Scalar& s, const Deg3Element& a);
bool operator==(const Deg3Element& a, const Deg3Element& b);

// Reduced characteristic polynomial X^3 - T X^2 + S X - N, division-free.
// Without `with_norm` N is left zero, which keeps T and S cheap on symbolic
// inputs of high degree.
CharData char_data(const Deg3Element& a, bool with_norm = true);
Scalar reduced_trace(const Deg3Element& a);
Scalar reduced_norm(const Deg3Element& a);
// a^# = a^2 - T(a) a + S(a) 1.
Deg3Element sharp(const Deg3Element& a);
bool is_invertible(const Deg3Element& a);
Deg3Element inverse(const Deg3Element& a);

// If a = s * 1, returns s (in the norm ring's base change).
std::optional<Scalar> as_central(const Deg3Element& a);

// Matrix3 helpers (indices are 0-based).
Deg3Element mat3(const AlgebraPtr& alg, const Matrix& m);
Matrix mat3_matrix(const Deg3Element& a);
Deg3Element diag3(const AlgebraPtr& alg, const Scalar& a, const Scalar& b, const Scalar& c);
Deg3Element unit_e(const AlgebraPtr& alg, std::size_t i, std::size_t j);
Deg3Element transvection(const AlgebraPtr& alg, std::size_t i, std::size_t j, const Scalar& alpha);

// ProdOp helpers.
Deg3Element pair_element(const AlgebraPtr& prodop, const Deg3Element& x, const Deg3Element& y);
std::pair<Deg3Element, Deg3Element> pair_components(const Deg3Element& a);

// Coordinates of `a` over a subring k of the base: the base itself, or k
// when the base is a quadratic or cubic extension of k (each coordinate then
// expands into its extension coefficients).
Vec flatten(const Deg3Element& a, const RingPtr& k);
Deg3Element unflatten(const AlgebraPtr& alg, const RingPtr& k, const Vec& coords);
std::size_t flat_dim(const AlgebraPtr& alg, const RingPtr& k);
// Extends scalars of `r` (the base or an extension of k) from k to `s`.
RingPtr base_change(const RingPtr& r, const RingPtr& k, const RingPtr& s);

// ---------------------------------------------------------------- involutions

class Involution;
using InvolutionPtr = std::shared_ptr<const Involution>;

class Involution {
 public:
  enum class Kind { Switch, ConjTranspose, UTwist };

  static InvolutionPtr switch_involution(const AlgebraPtr& prodop);
  static InvolutionPtr conj_transpose(const AlgebraPtr& matrix3_over_quadratic);
  // sigma_u(x) = u sigma(x) u^{-1}; requires sigma(u) = u and u invertible.
  static InvolutionPtr utwist(const InvolutionPtr& base, const Deg3Element& u);

  Kind kind() const { return kind_; }
  const AlgebraPtr& algebra() const { return alg_; }
  const InvolutionPtr& base() const { return base_; }
  const std::optional<Deg3Element>& twist() const { return u_; }

  Deg3Element apply(const Deg3Element& a) const;
  std::string to_string() const;

 private:
  Involution() = default;

  Kind kind_ = Kind::Switch;
  AlgebraPtr alg_;
  InvolutionPtr base_;
  std::optional<Deg3Element> u_;
  std::optional<Deg3Element> u_inv_;
};

// Nontrivial automorphism of the center K (quadratic extension or k x k).
Scalar center_conj(const Scalar& kappa);
// Trace K -> k.
Scalar center_trace(const Scalar& kappa);
// The k-part of a K-scalar that is fixed by conjugation, else nullopt.
std::optional<Scalar> center_to_base(const Scalar& kappa);

// ---------------------------------------------------------------- groups

enum class Group { SL1, U, SU, Sim };

struct MembershipResult {
  bool member = false;
  std::optional<Scalar> witness;  // lambda for Sim
};

MembershipResult membership(const Deg3Element& g, Group which, const InvolutionPtr& sigma = nullptr);

// d = E_{i1 j1}(a1) ... E_{im jm}(am) for a norm-one 3x3 matrix over a field.
struct Transvection {
  std::size_t i, j;  // 0-based
  Scalar alpha;
};
std::vector<Transvection> transvection_factorization(const Deg3Element& d);
Deg3Element transvection_product(const AlgebraPtr& alg, const std::vector<Transvection>& factors);

}  // namespace albert
