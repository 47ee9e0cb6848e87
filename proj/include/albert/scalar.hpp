#pragma once

// Exact scalar tower: Q, F_p, simple extensions base[g]/(f) of degree 2 or 3,
// multivariate polynomial rings (optionally with square-zero variables, used
// as dual numbers), and univariate rational-function fields k(t).
//
// Rings are immutable and shared through RingPtr. Scalars are immutable
// values carrying their parent ring; compound payloads are shared, so copies
// are cheap. Binary operations between scalars of different rings coerce
// along the canonical embeddings of the tower and fail with
// Errc::IncompatibleParents otherwise.

#include <albert/error.hpp>

#include <gmpxx.h>

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace albert {

class Ring;
class Scalar;
using RingPtr = std::shared_ptr<const Ring>;

enum class RingKind { Rationals, PrimeField, Extension, Polynomial, RationalFunctions };

// A monomial as a sorted multiset of variable indices. Total degree is
// bounded by kMaxDegree, which covers every identity this library checks.
struct Monomial {
  static constexpr std::size_t kMaxDegree = 15;

  std::uint8_t degree = 0;
  std::array<std::uint8_t, kMaxDegree> vars{};

  static Monomial variable(std::size_t index);
  std::size_t exponent(std::size_t index) const;
  bool squarefree() const;

  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

Monomial operator*(const Monomial& a, const Monomial& b);

struct PolyTerm;
struct ExtData;
struct PolyData;
struct RatFuncData;

class Scalar {
 public:
  Scalar() = default;

  static Scalar from_int(const RingPtr& ring, long value);
  static Scalar from_rational(const RingPtr& ring, const mpq_class& value);
  static Scalar zero(const RingPtr& ring) { return from_int(ring, 0); }
  static Scalar one(const RingPtr& ring) { return from_int(ring, 1); }
  // Generator g of base[g]/(f).
  static Scalar generator(const RingPtr& extension);
  // Element c_0 + c_1 g + ... of an extension ring.
  static Scalar from_coeffs(const RingPtr& extension, std::vector<Scalar> coeffs);
  // i-th variable of a polynomial ring.
  static Scalar variable(const RingPtr& poly_ring, std::size_t index);
  static Scalar from_terms(const RingPtr& poly_ring, std::vector<PolyTerm> terms);
  // Quotient num/den of univariate polynomials given by ascending
  // coefficient lists over the base field; the result is canonical.
  static Scalar fraction(const RingPtr& ratfunc_ring, std::vector<Scalar> num,
                         std::vector<Scalar> den);

  bool valid() const { return ring_ != nullptr; }
  const RingPtr& ring() const { return ring_; }

  bool is_zero() const;
  bool is_one() const;

  const mpq_class& rational() const;
  std::int64_t residue() const;
  const std::vector<Scalar>& coeffs() const;       // extension coordinates
  const std::vector<PolyTerm>& terms() const;      // polynomial terms, sorted
  const std::vector<Scalar>& numerator() const;    // rational function
  const std::vector<Scalar>& denominator() const;  // rational function, monic

  Scalar operator-() const;
  Scalar inverse() const;
  Scalar pow(unsigned exponent) const;

  // Polynomial rings: constant term, and whether the value is constant.
  bool is_constant() const;
  Scalar constant_term() const;

  std::string to_string() const;

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  friend bool operator==(const Scalar& a, const Scalar& b);

  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

 private:
  friend class ScalarOps;
  using Payload = std::variant<std::monostate, mpq_class, std::int64_t, std::shared_ptr<const ExtData>,
                               std::shared_ptr<const PolyData>, std::shared_ptr<const RatFuncData>>;

  Scalar(RingPtr ring, Payload payload) : ring_(std::move(ring)), payload_(std::move(payload)) {}

  RingPtr ring_;
  Payload payload_;
};

Scalar operator*(long a, const Scalar& b);
Scalar operator+(const Scalar& a, long b);
Scalar operator-(const Scalar& a, long b);

struct PolyTerm {
  Monomial mono;
  Scalar coef;
};

struct ExtData {
  std::vector<Scalar> c;
};

struct PolyData {
  std::vector<PolyTerm> terms;
};

struct RatFuncData {
  std::vector<Scalar> num;
  std::vector<Scalar> den;
};

class Ring {
 public:
  static RingPtr rationals();
  static RingPtr prime_field(std::int64_t p);
  // base[gen]/(gen^m + c_{m-1} gen^{m-1} + ... + c_0) for m = 2 or 3, with
  // `lower` = {c_0, ..., c_{m-1}}.
  static RingPtr extension(const RingPtr& base, std::vector<Scalar> lower, std::string gen);
  // base[gen]/(gen^2 - d).
  static RingPtr quadratic(const RingPtr& base, const Scalar& d, std::string gen = "s");
  // The split quadratic etale algebra base x base, realized as base[e]/(e^2 - e)
  // so that it is etale in every characteristic.
  static RingPtr split_quadratic(const RingPtr& base);
  static RingPtr polynomial(const RingPtr& base, std::vector<std::string> names, bool nilpotent = false);
  static RingPtr polynomial(const RingPtr& base, std::size_t nvars, bool nilpotent = false,
                            const std::string& prefix = "X");
  static RingPtr rational_functions(const RingPtr& base, std::string var = "t");

  RingKind kind() const { return kind_; }
  std::int64_t modulus() const { return p_; }
  const RingPtr& base() const { return base_; }
  std::size_t degree() const { return lower_.size(); }
  const std::vector<Scalar>& lower() const { return lower_; }
  std::size_t nvars() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  bool nilpotent() const { return nilpotent_; }
  const std::string& generator_name() const { return gen_; }

  std::int64_t characteristic() const;
  // Q, F_p and k(t) are fields; extensions are fields when the modulus has
  // no root in a base field (exact test for degree 2 and 3 over Q and F_p).
  bool is_field() const;
  // The bottom prime field (Q or F_p) of the tower.
  RingPtr prime() const;

  std::string to_string() const;

 private:
  Ring() = default;

  RingKind kind_ = RingKind::Rationals;
  std::int64_t p_ = 0;
  RingPtr base_;
  std::vector<Scalar> lower_;
  std::vector<std::string> names_;
  bool nilpotent_ = false;
  std::string gen_;
};

bool same_ring(const Ring& a, const Ring& b);
bool same_ring(const RingPtr& a, const RingPtr& b);
// True when `from` maps canonically into `to` (including equality).
bool embeds(const Ring& from, const Ring& to);
Scalar embed(const Scalar& x, const RingPtr& to);
// The smallest of the two rings into which both embed, if either embeds into
// the other; throws IncompatibleParents otherwise.
RingPtr join(const RingPtr& a, const RingPtr& b);
RingPtr common_ring(std::span<const Scalar> xs);
std::vector<Scalar> embed_all(std::span<const Scalar> xs, const RingPtr& to);

// Quadratic extensions: conjugation (the nontrivial automorphism), trace and
// norm down to the base ring.
Scalar ext_conj(const Scalar& x);
Scalar ext_trace(const Scalar& x);
Scalar ext_norm(const Scalar& x);
// Coordinate c_i of an extension element (zero beyond the stored length).
Scalar ext_coeff(const Scalar& x, std::size_t i);
// Components (alpha, beta) of x in the split algebra base x base.
std::pair<Scalar, Scalar> split_components(const Scalar& x);
Scalar split_from_components(const RingPtr& split, const Scalar& alpha, const Scalar& beta);

// Evaluates a rational function at a point of its base field. Throws
// PoleAtPoint when the canonical denominator vanishes there.
Scalar ratfunc_eval(const Scalar& r, const Scalar& point);
// Rational function in the variable of `ratfunc_ring` from an ascending
// polynomial coefficient list.
Scalar ratfunc_from_poly(const RingPtr& ratfunc_ring, std::vector<Scalar> coeffs);
Scalar ratfunc_variable(const RingPtr& ratfunc_ring);

// Polynomial rings: substitutes `values[i]` for variable i (values live in a
// ring into which the coefficient ring embeds).
Scalar poly_substitute(const Scalar& p, std::span<const Scalar> values);
std::size_t poly_total_degree(const Scalar& p);

}  // namespace albert
