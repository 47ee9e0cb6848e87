#pragma once

// Cubic norm structures (N, #, c) on a finite free carrier, the structure
// derived from them (trace forms, cross product, U-operators, inverses) and
// exact checks of the defining identities.
//
// Norm and adjoint evaluators accept vectors over any ring into which the
// base field embeds. Directional derivatives are read off from evaluations
// over square-zero polynomial rings, and identities are compared as
// polynomial normal forms in generic coordinates.

#include <albert/deg3.hpp>
#include <albert/random.hpp>

#include <functional>
#include <memory>
#include <string>

namespace albert {

class CubicJordan {
 public:
  virtual ~CubicJordan() = default;

  virtual std::size_t dim() const = 0;
  virtual const RingPtr& base_ring() const = 0;
  virtual Vec unit() const = 0;
  virtual Scalar norm(const Vec& x) const = 0;
  virtual Vec sharp(const Vec& x) const = 0;
  virtual std::string describe() const = 0;
};

using JordanPtr = std::shared_ptr<const CubicJordan>;

// D_+ : the cubic norm structure (N_D, #_D, 1) of a degree-3 algebra whose
// norm lands in its base ring.
class DPlus final : public CubicJordan {
 public:
  explicit DPlus(AlgebraPtr d);

  std::size_t dim() const override { return d_->dim(); }
  const RingPtr& base_ring() const override { return d_->base(); }
  Vec unit() const override { return d3_one(d_).c; }
  Scalar norm(const Vec& x) const override { return reduced_norm(make_element(d_, x)); }
  Vec sharp(const Vec& x) const override { return albert::sharp(make_element(d_, x)).c; }
  std::string describe() const override { return "plus(" + d_->to_string() + ")"; }

  const AlgebraPtr& algebra() const { return d_; }

 private:
  AlgebraPtr d_;
};

// A structure given by callables; used for deliberately broken structures.
class FunctionalJordan final : public CubicJordan {
 public:
  using NormFn = std::function<Scalar(const Vec&)>;
  using SharpFn = std::function<Vec(const Vec&)>;

  FunctionalJordan(RingPtr k, Vec unit, NormFn norm, SharpFn sharp, std::string name)
      : k_(std::move(k)), unit_(std::move(unit)), norm_(std::move(norm)), sharp_(std::move(sharp)),
        name_(std::move(name)) {}

  std::size_t dim() const override { return unit_.size(); }
  const RingPtr& base_ring() const override { return k_; }
  Vec unit() const override { return unit_; }
  Scalar norm(const Vec& x) const override { return norm_(x); }
  Vec sharp(const Vec& x) const override { return sharp_(x); }
  std::string describe() const override { return name_; }

 private:
  RingPtr k_;
  Vec unit_;
  NormFn norm_;
  SharpFn sharp_;
  std::string name_;
};

// Restriction of a structure to a subspace with the given basis, which must
// contain c and be closed under #.
class RestrictedJordan final : public CubicJordan {
 public:
  RestrictedJordan(JordanPtr parent, std::vector<Vec> basis);

  std::size_t dim() const override { return basis_.size(); }
  const RingPtr& base_ring() const override { return parent_->base_ring(); }
  Vec unit() const override { return unit_; }
  Scalar norm(const Vec& x) const override { return parent_->norm(expand(x)); }
  Vec sharp(const Vec& x) const override { return restrict(parent_->sharp(expand(x))); }
  std::string describe() const override;

  Vec expand(const Vec& x) const;
  // Coordinates of a parent vector lying in the subspace.
  Vec restrict(const Vec& v) const;

 private:
  JordanPtr parent_;
  std::vector<Vec> basis_;
  Matrix left_inverse_;  // basis_.size() x parent dim, left inverse of the basis matrix
  Vec unit_;
};

// ---------------------------------------------------------------- derived

// T(x) = coefficient of e in N(c + e x), e^2 = 0.
Scalar trace_linear(const CubicJordan& j, const Vec& x);
// T(x, y) = T(x) T(y) - [e1 e2] N(c + e1 x + e2 y).
Scalar trace_bilinear(const CubicJordan& j, const Vec& x, const Vec& y);
// Directional derivative of N at x in direction y: [e] N(x + e y).
Scalar directional(const CubicJordan& j, const Vec& x, const Vec& y);
// x cross y = (x + y)^# - x^# - y^#.
Vec cross(const CubicJordan& j, const Vec& x, const Vec& y);
// U_x(y) = T(x, y) x - x^# cross y.
Vec u_op(const CubicJordan& j, const Vec& x, const Vec& y);
// Matrix of y -> U_x(y) in the standard basis.
Matrix u_matrix(const CubicJordan& j, const Vec& x);
// N(x)^{-1} x^#; throws NotInvertible when N(x) is not a unit.
Vec jordan_inverse(const CubicJordan& j, const Vec& x);

Matrix gram(const CubicJordan& j, const std::vector<Vec>& basis);
Matrix gram(const CubicJordan& j);
bool nondegenerate(const CubicJordan& j);

// Generic coordinates X_0..X_{n-1} (and optionally Y_0..Y_{n-1}) over k.
struct GenericPoint {
  RingPtr ring;
  Vec x, y;
};
GenericPoint generic_point(const RingPtr& k, std::size_t n, bool with_y = false);

// ---------------------------------------------------------------- checks

struct CheckResult {
  std::string id;     // stable identifier, e.g. "axiom-5"
  std::string label;  // the identity checked
  bool pass = true;
  std::string mode;   // "symbolic", "sampled", "direct"
  std::size_t instances = 0;
  std::string detail;  // counterexample or witness
};

struct AxiomReport {
  std::vector<CheckResult> checks;
  bool all_pass() const;
  const CheckResult* find(const std::string& id) const;
  std::string to_text() const;
};

struct SuiteOptions {
  std::size_t samples = 20;
  std::uint64_t seed = 1;
  bool symbolic = true;
  bool parallel = false;
  SampleBounds bounds{};
};

// Axioms (2) N(c)=1, (3) nondegeneracy, (4) T(x#,y) = [e]N(x + e y),
// (5) x## = N(x) x, (6) c# = c, (7) c x x = T(x) c - x. Samples start with
// x = c; symbolic checks run when sampling found no failure.
AxiomReport axiom_suite(const CubicJordan& j, const SuiteOptions& opt);

// U_{U_x y} = U_x U_y U_x on `pairs` seeded random pairs.
CheckResult fundamental_formula(const CubicJordan& j, std::size_t pairs, std::uint64_t seed,
                                const SampleBounds& bounds = {});
// N(U_a x) = N(a)^2 N(x), symbolic in generic a and x.
CheckResult degree_identity_u(const CubicJordan& j);
// N(x#) = N(x)^2, symbolic.
CheckResult degree_identity_sharp(const CubicJordan& j);
// On D_+: T(x, y) = T_D(x y) for `pairs` seeded pairs.
CheckResult trace_form_oracle(const AlgebraPtr& d, std::size_t pairs, std::uint64_t seed,
                              const SampleBounds& bounds = {});

// ---------------------------------------------------------------- subspaces

// Smallest subspace containing c and the generators, closed under # and x.
std::vector<Vec> subalgebra_closure(const CubicJordan& j, const std::vector<Vec>& generators);

struct FixedSpace {
  std::vector<Vec> basis;
  bool sharp_closed = false;
};
FixedSpace fixed_subspace(const CubicJordan& j, const Matrix& f);

// Whether every vector in `vs` lies in the span of `basis`.
bool in_span(const std::vector<Vec>& basis, const std::vector<Vec>& vs);

}  // namespace albert
