#include <albert/scalar.hpp>

#include "upoly.hpp"

#include <algorithm>
#include <sstream>

namespace albert {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::DivisionByZero: return "division-by-zero";
    case Errc::IncompatibleParents: return "incompatible-parents";
    case Errc::PoleAtPoint: return "pole-at-point";
    case Errc::NotInvertible: return "not-invertible";
    case Errc::InseparableCubic: return "inseparable-cubic";
    case Errc::NotEtale: return "not-etale";
    case Errc::ZeroParameter: return "zero-parameter";
    case Errc::NotNormOne: return "not-norm-one";
    case Errc::NoInvolutionAttached: return "no-involution-attached";
    case Errc::InvalidInvolution: return "invalid-involution";
    case Errc::InvalidAutomorphism: return "invalid-automorphism";
    case Errc::ZeroLambda: return "zero-lambda";
    case Errc::InadmissiblePair: return "inadmissible-pair";
    case Errc::IdentificationFailed: return "identification-failed";
    case Errc::NotASimilarity: return "not-a-similarity";
    case Errc::SingularMatrix: return "singular-matrix";
    case Errc::NormMismatch: return "norm-mismatch";
    case Errc::NormConstraintViolated: return "norm-constraint-violated";
    case Errc::NotASimilitude: return "not-a-similitude";
    case Errc::BadQNorm: return "bad-q-norm";
    case Errc::MembershipFailure: return "membership-failure";
    case Errc::NormProductFailure: return "norm-product-failure";
    case Errc::FactorizationMismatch: return "factorization-mismatch";
    case Errc::GenericFiberFailure: return "generic-fiber-failure";
    case Errc::PoleAtEndpoint: return "pole-at-endpoint";
    case Errc::MultiplierVanishesAtEndpoint: return "multiplier-vanishes-at-endpoint";
    case Errc::NonSplitCoordinates: return "non-split-coordinates";
    case Errc::DimensionMismatch: return "dimension-mismatch";
    case Errc::Unsupported: return "unsupported";
    case Errc::InvalidArgument: return "invalid-argument";
    case Errc::ParseError: return "parse-error";
    case Errc::UnresolvedReference: return "unresolved-reference";
    case Errc::IoError: return "io-error";
  }
  return "unknown";
}

// ---------------------------------------------------------------- monomials

Monomial Monomial::variable(std::size_t index) {
  if (index > 255) throw Error(Errc::Unsupported, "at most 256 polynomial variables");
  Monomial m;
  m.degree = 1;
  m.vars[0] = static_cast<std::uint8_t>(index);
  return m;
}

std::size_t Monomial::exponent(std::size_t index) const {
  return static_cast<std::size_t>(std::count(vars.begin(), vars.begin() + degree, index));
}

bool Monomial::squarefree() const {
  for (std::size_t i = 1; i < degree; ++i)
    if (vars[i] == vars[i - 1]) return false;
  return true;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  if (a.degree + b.degree > Monomial::kMaxDegree)
    throw Error(Errc::Unsupported, "monomial degree exceeds supported bound");
  Monomial out;
  out.degree = static_cast<std::uint8_t>(a.degree + b.degree);
  std::merge(a.vars.begin(), a.vars.begin() + a.degree, b.vars.begin(), b.vars.begin() + b.degree,
             out.vars.begin());
  return out;
}

// ---------------------------------------------------------------- rings

namespace {

bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::int64_t mod_reduce(const mpz_class& v, std::int64_t p) {
  mpz_class r = v % p;
  if (r < 0) r += p;
  return r.get_si();
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t p) {
  if (a == 0) throw Error(Errc::DivisionByZero, "inverse of zero in F_" + std::to_string(p));
  std::int64_t t = 0, new_t = 1, r = p, new_r = a;
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
    std::tie(r, new_r) = std::make_pair(new_r, r - q * new_r);
  }
  if (t < 0) t += p;
  return t;
}

// Discriminant of the monic polynomial with lower coefficients `c`.
Scalar discriminant(const std::vector<Scalar>& c) {
  if (c.size() == 2) return c[1] * c[1] - 4 * c[0];
  // x^3 + b x^2 + c x + d
  const Scalar& d = c[0];
  const Scalar& cc = c[1];
  const Scalar& b = c[2];
  return b * b * cc * cc - 4 * cc * cc * cc - 4 * b * b * b * d - 27 * d * d + 18 * b * cc * d;
}

std::string modulus_string(const std::vector<Scalar>& lower, const std::string& gen);

bool rational_is_square(const mpq_class& q) {
  if (q < 0) return false;
  return mpz_perfect_square_p(q.get_num().get_mpz_t()) && mpz_perfect_square_p(q.get_den().get_mpz_t());
}

}  // namespace

RingPtr Ring::rationals() {
  static const RingPtr q = [] {
    auto r = std::shared_ptr<Ring>(new Ring);
    r->kind_ = RingKind::Rationals;
    return RingPtr(r);
  }();
  return q;
}

RingPtr Ring::prime_field(std::int64_t p) {
  if (p >= (std::int64_t{1} << 31) || !is_prime(p))
    throw Error(Errc::ParseError, "F_p requires a prime p below 2^31, got " + std::to_string(p));
  auto r = std::shared_ptr<Ring>(new Ring);
  r->kind_ = RingKind::PrimeField;
  r->p_ = p;
  return r;
}

RingPtr Ring::extension(const RingPtr& base, std::vector<Scalar> lower, std::string gen) {
  if (lower.size() != 2 && lower.size() != 3)
    throw Error(Errc::Unsupported, "extensions must have degree 2 or 3");
  for (auto& c : lower) c = embed(c, base);
  if (discriminant(lower).is_zero())
    throw Error(lower.size() == 3 ? Errc::InseparableCubic : Errc::NotEtale,
                "modulus of " + gen + " has zero discriminant");
  auto r = std::shared_ptr<Ring>(new Ring);
  r->kind_ = RingKind::Extension;
  r->base_ = base;
  r->lower_ = std::move(lower);
  r->gen_ = std::move(gen);
  return r;
}

RingPtr Ring::quadratic(const RingPtr& base, const Scalar& d, std::string gen) {
  Scalar dd = embed(d, base);
  if (dd.is_zero()) throw Error(Errc::ZeroParameter, "quadratic extension needs d != 0");
  return extension(base, {-dd, Scalar::zero(base)}, std::move(gen));
}

RingPtr Ring::split_quadratic(const RingPtr& base) {
  return extension(base, {Scalar::zero(base), Scalar::from_int(base, -1)}, "e");
}

RingPtr Ring::polynomial(const RingPtr& base, std::vector<std::string> names, bool nilpotent) {
  auto r = std::shared_ptr<Ring>(new Ring);
  r->kind_ = RingKind::Polynomial;
  r->base_ = base;
  r->names_ = std::move(names);
  r->nilpotent_ = nilpotent;
  return r;
}

RingPtr Ring::polynomial(const RingPtr& base, std::size_t nvars, bool nilpotent, const std::string& prefix) {
  std::vector<std::string> names;
  names.reserve(nvars);
  for (std::size_t i = 0; i < nvars; ++i) names.push_back(prefix + std::to_string(i));
  return polynomial(base, std::move(names), nilpotent);
}

RingPtr Ring::rational_functions(const RingPtr& base, std::string var) {
  if (!base->is_field()) throw Error(Errc::Unsupported, "rational functions need a field of constants");
  auto r = std::shared_ptr<Ring>(new Ring);
  r->kind_ = RingKind::RationalFunctions;
  r->base_ = base;
  r->gen_ = std::move(var);
  return r;
}

std::int64_t Ring::characteristic() const {
  const Ring* r = this;
  while (r->base_) r = r->base_.get();
  return r->kind_ == RingKind::PrimeField ? r->p_ : 0;
}

RingPtr Ring::prime() const {
  const Ring* r = this;
  RingPtr last;
  while (r->base_) {
    last = r->base_;
    r = r->base_.get();
  }
  if (!last) return kind_ == RingKind::Rationals ? rationals() : prime_field(p_);
  return last;
}

bool Ring::is_field() const {
  switch (kind_) {
    case RingKind::Rationals:
    case RingKind::PrimeField:
    case RingKind::RationalFunctions:
      return true;
    case RingKind::Polynomial:
      return names_.empty() && base_->is_field();
    case RingKind::Extension: {
      if (!base_->is_field()) return false;
      // A degree 2 or 3 polynomial is irreducible iff it has no root.
      if (base_->kind_ == RingKind::Rationals && lower_.size() == 2)
        return !rational_is_square(discriminant(lower_).rational());
      if (base_->kind_ == RingKind::Rationals) {
        // Rational root test on the integral rescaling y = D x.
        mpz_class den = 1;
        for (const auto& c : lower_) den = lcm(den, c.rational().get_den());
        std::vector<mpz_class> ic(3);
        mpz_class scale = den;
        for (int i = 2; i >= 0; --i) {
          mpq_class v = lower_[static_cast<std::size_t>(i)].rational() * scale;
          ic[static_cast<std::size_t>(i)] = v.get_num();
          scale *= den;
        }
        auto f = [&](const mpz_class& y) -> mpz_class { return ((y + ic[2]) * y + ic[1]) * y + ic[0]; };
        if (ic[0] == 0) return false;
        mpz_class c0 = abs(ic[0]);
        for (mpz_class d = 1; d * d <= c0 && d <= 10000000; ++d) {
          if (c0 % d != 0) continue;
          for (const mpz_class& cand : {d, mpz_class(c0 / d)}) {
            if (f(cand) == 0 || f(-cand) == 0) return false;
          }
        }
        return true;
      }
      if (base_->kind_ == RingKind::PrimeField && base_->p_ <= 1000003) {
        const auto p = base_->p_;
        for (std::int64_t x = 0; x < p; ++x) {
          Scalar xs = Scalar::from_int(base_, static_cast<long>(x));
          Scalar v = Scalar::zero(base_);
          Scalar pw = Scalar::one(base_);
          for (const auto& c : lower_) {
            v = v + c * pw;
            pw = pw * xs;
          }
          if ((v + pw).is_zero()) return false;
        }
        return true;
      }
      return true;
    }
  }
  return false;
}

std::string Ring::to_string() const {
  switch (kind_) {
    case RingKind::Rationals: return "Q";
    case RingKind::PrimeField: return "F" + std::to_string(p_);
    case RingKind::Extension: return base_->to_string() + "[" + gen_ + "]/(" + modulus_string(lower_, gen_) + ")";
    case RingKind::Polynomial: {
      std::string s = base_->to_string() + (nilpotent_ ? "[eps:" : "[");
      for (std::size_t i = 0; i < names_.size(); ++i) s += (i ? "," : "") + names_[i];
      return s + "]";
    }
    case RingKind::RationalFunctions: return base_->to_string() + "(" + gen_ + ")";
  }
  return "?";
}

bool same_ring(const Ring& a, const Ring& b) {
  if (&a == &b) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case RingKind::Rationals: return true;
    case RingKind::PrimeField: return a.modulus() == b.modulus();
    case RingKind::Extension:
      if (a.degree() != b.degree() || !same_ring(*a.base(), *b.base())) return false;
      for (std::size_t i = 0; i < a.degree(); ++i)
        if (!(a.lower()[i] == b.lower()[i])) return false;
      return true;
    case RingKind::Polynomial:
      return a.nilpotent() == b.nilpotent() && a.names() == b.names() && same_ring(*a.base(), *b.base());
    case RingKind::RationalFunctions:
      return a.generator_name() == b.generator_name() && same_ring(*a.base(), *b.base());
  }
  return false;
}

bool same_ring(const RingPtr& a, const RingPtr& b) { return a == b || same_ring(*a, *b); }

namespace {

bool same_modulus_after_embedding(const Ring& from, const Ring& to) {
  for (std::size_t i = 0; i < from.degree(); ++i)
    if (!(embed(from.lower()[i], to.base()) == to.lower()[i])) return false;
  return true;
}

}  // namespace

bool embeds(const Ring& from, const Ring& to) {
  if (same_ring(from, to)) return true;
  switch (to.kind()) {
    case RingKind::Rationals:
    case RingKind::PrimeField:
      return false;
    case RingKind::Extension:
      if (from.kind() == RingKind::Extension && from.degree() == to.degree() &&
          from.generator_name() == to.generator_name() && embeds(*from.base(), *to.base()) &&
          same_modulus_after_embedding(from, to))
        return true;
      return embeds(from, *to.base());
    case RingKind::Polynomial:
      if (from.kind() == RingKind::Polynomial && from.names() == to.names() &&
          from.nilpotent() == to.nilpotent() && embeds(*from.base(), *to.base()))
        return true;
      return embeds(from, *to.base());
    case RingKind::RationalFunctions:
      if (from.kind() == RingKind::RationalFunctions && from.generator_name() == to.generator_name() &&
          embeds(*from.base(), *to.base()))
        return true;
      return embeds(from, *to.base());
  }
  return false;
}

RingPtr join(const RingPtr& a, const RingPtr& b) {
  if (same_ring(a, b)) return a;
  if (embeds(*a, *b)) return b;
  if (embeds(*b, *a)) return a;
  throw Error(Errc::IncompatibleParents, a->to_string() + " vs " + b->to_string());
}

RingPtr common_ring(std::span<const Scalar> xs) {
  if (xs.empty()) throw Error(Errc::DimensionMismatch, "common ring of an empty list");
  RingPtr r = xs[0].ring();
  for (const auto& x : xs.subspan(1))
    if (!same_ring(r, x.ring())) r = join(r, x.ring());
  return r;
}

std::vector<Scalar> embed_all(std::span<const Scalar> xs, const RingPtr& to) {
  std::vector<Scalar> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(embed(x, to));
  return out;
}

// ---------------------------------------------------------------- scalar ops

class ScalarOps {
 public:
  using Payload = Scalar::Payload;

  static Scalar make(const RingPtr& r, Payload p) { return Scalar(r, std::move(p)); }
  static const Payload& payload(const Scalar& s) { return s.payload_; }

  static Scalar ext(const RingPtr& r, std::vector<Scalar> c) {
    return Scalar(r, std::make_shared<const ExtData>(ExtData{std::move(c)}));
  }
  static Scalar poly(const RingPtr& r, std::vector<PolyTerm> t) {
    return Scalar(r, std::make_shared<const PolyData>(PolyData{std::move(t)}));
  }
  static Scalar ratfunc(const RingPtr& r, upoly::UPoly num, upoly::UPoly den) {
    upoly::trim(num);
    upoly::trim(den);
    if (den.empty()) throw Error(Errc::DivisionByZero, "rational function with zero denominator");
    if (num.empty()) {
      den = {Scalar::one(r->base())};
    } else {
      upoly::UPoly g = upoly::gcd(num, den);
      if (g.size() > 1) {
        upoly::UPoly q, rem;
        upoly::divmod(num, g, q, rem);
        num = std::move(q);
        upoly::divmod(den, g, q, rem);
        den = std::move(q);
      }
      const Scalar lc_inv = den.back().inverse();
      if (!lc_inv.is_one()) {
        num = upoly::scale(num, lc_inv);
        den = upoly::scale(den, lc_inv);
      }
    }
    return Scalar(r, std::make_shared<const RatFuncData>(RatFuncData{std::move(num), std::move(den)}));
  }

  static std::vector<PolyTerm> canonical_terms(std::vector<PolyTerm> t) {
    std::sort(t.begin(), t.end(), [](const PolyTerm& a, const PolyTerm& b) { return a.mono < b.mono; });
    std::vector<PolyTerm> out;
    out.reserve(t.size());
    for (auto& term : t) {
      if (!out.empty() && out.back().mono == term.mono) {
        out.back().coef = out.back().coef + term.coef;
      } else {
        if (!out.empty() && out.back().coef.is_zero()) out.pop_back();
        out.push_back(std::move(term));
      }
    }
    if (!out.empty() && out.back().coef.is_zero()) out.pop_back();
    return out;
  }

  static Scalar add(const RingPtr& r, const Scalar& a, const Scalar& b, bool subtract) {
    switch (r->kind()) {
      case RingKind::Rationals:
        return make(r, subtract ? mpq_class(a.rational() - b.rational()) : mpq_class(a.rational() + b.rational()));
      case RingKind::PrimeField: {
        const auto p = r->modulus();
        std::int64_t v = subtract ? a.residue() - b.residue() : a.residue() + b.residue();
        v %= p;
        if (v < 0) v += p;
        return make(r, v);
      }
      case RingKind::Extension: {
        std::vector<Scalar> c(r->degree());
        for (std::size_t i = 0; i < c.size(); ++i)
          c[i] = subtract ? a.coeffs()[i] - b.coeffs()[i] : a.coeffs()[i] + b.coeffs()[i];
        return ext(r, std::move(c));
      }
      case RingKind::Polynomial: {
        const auto& ta = a.terms();
        const auto& tb = b.terms();
        std::vector<PolyTerm> out;
        out.reserve(ta.size() + tb.size());
        std::size_t i = 0, j = 0;
        while (i < ta.size() || j < tb.size()) {
          if (j == tb.size() || (i < ta.size() && ta[i].mono < tb[j].mono)) {
            out.push_back(ta[i++]);
          } else if (i == ta.size() || tb[j].mono < ta[i].mono) {
            out.push_back({tb[j].mono, subtract ? -tb[j].coef : tb[j].coef});
            ++j;
          } else {
            Scalar c = subtract ? ta[i].coef - tb[j].coef : ta[i].coef + tb[j].coef;
            if (!c.is_zero()) out.push_back({ta[i].mono, std::move(c)});
            ++i;
            ++j;
          }
        }
        return poly(r, std::move(out));
      }
      case RingKind::RationalFunctions: {
        const auto& an = a.numerator();
        const auto& ad = a.denominator();
        const auto& bn = b.numerator();
        const auto& bd = b.denominator();
        if (ad.size() == 1 && bd.size() == 1)
          return ratfunc(r, subtract ? upoly::sub(an, bn) : upoly::add(an, bn), ad);
        upoly::UPoly x = upoly::mul(an, bd);
        upoly::UPoly y = upoly::mul(bn, ad);
        return ratfunc(r, subtract ? upoly::sub(x, y) : upoly::add(x, y), upoly::mul(ad, bd));
      }
    }
    throw Error(Errc::Unsupported, "add");
  }

  static Scalar mul(const RingPtr& r, const Scalar& a, const Scalar& b) {
    switch (r->kind()) {
      case RingKind::Rationals: return make(r, mpq_class(a.rational() * b.rational()));
      case RingKind::PrimeField:
        return make(r, static_cast<std::int64_t>((static_cast<__int128>(a.residue()) * b.residue()) % r->modulus()));
      case RingKind::Extension: return ext(r, ext_mul(r, a.coeffs(), b.coeffs()));
      case RingKind::Polynomial: {
        const auto& ta = a.terms();
        const auto& tb = b.terms();
        if (ta.empty() || tb.empty()) return poly(r, {});
        std::vector<PolyTerm> out;
        out.reserve(ta.size() * tb.size());
        const bool nil = r->nilpotent();
        for (const auto& x : ta) {
          for (const auto& y : tb) {
            Monomial m = x.mono * y.mono;
            if (nil && !m.squarefree()) continue;
            out.push_back({m, x.coef * y.coef});
          }
        }
        return poly(r, canonical_terms(std::move(out)));
      }
      case RingKind::RationalFunctions:
        return ratfunc(r, upoly::mul(a.numerator(), b.numerator()), upoly::mul(a.denominator(), b.denominator()));
    }
    throw Error(Errc::Unsupported, "mul");
  }

  static std::vector<Scalar> ext_mul(const RingPtr& r, const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
    const std::size_t m = r->degree();
    std::vector<Scalar> prod(2 * m - 1);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        Scalar p = a[i] * b[j];
        prod[i + j] = prod[i + j].valid() ? prod[i + j] + p : p;
      }
    // g^m = -(c_0 + c_1 g + ... + c_{m-1} g^{m-1})
    for (std::size_t k = 2 * m - 2; k >= m; --k) {
      const Scalar c = prod[k];
      if (!c.is_zero())
        for (std::size_t j = 0; j < m; ++j) prod[k - m + j] = prod[k - m + j] - c * r->lower()[j];
    }
    prod.resize(m);
    return prod;
  }

  static Scalar inverse(const Scalar& a) {
    const RingPtr& r = a.ring();
    switch (r->kind()) {
      case RingKind::Rationals:
        if (a.rational() == 0) throw Error(Errc::DivisionByZero, "inverse of 0 in Q");
        return make(r, mpq_class(1 / a.rational()));
      case RingKind::PrimeField: return make(r, mod_inverse(a.residue(), r->modulus()));
      case RingKind::Extension: {
        if (a.is_zero()) throw Error(Errc::DivisionByZero, "inverse of 0 in " + r->to_string());
        // Multiplication-by-a matrix M (columns a*g^j); a^{-1} = adj(M) e_0 / det(M).
        const std::size_t m = r->degree();
        std::vector<std::vector<Scalar>> cols;
        std::vector<Scalar> basis(m, Scalar::zero(r->base()));
        for (std::size_t j = 0; j < m; ++j) {
          std::vector<Scalar> e = basis;
          e[j] = Scalar::one(r->base());
          cols.push_back(ext_mul(r, a.coeffs(), e));
        }
        auto M = [&](std::size_t i, std::size_t j) -> const Scalar& { return cols[j][i]; };
        std::vector<Scalar> adj_col(m);
        Scalar det;
        if (m == 2) {
          det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
          adj_col = {M(1, 1), -M(1, 0)};
        } else {
          auto minor = [&](std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) {
            return M(r0, c0) * M(r1, c1) - M(r0, c1) * M(r1, c0);
          };
          det = M(0, 0) * minor(1, 2, 1, 2) - M(0, 1) * minor(1, 2, 0, 2) + M(0, 2) * minor(1, 2, 0, 1);
          adj_col = {minor(1, 2, 1, 2), -minor(1, 2, 0, 2), minor(1, 2, 0, 1)};
        }
        if (det.is_zero()) throw Error(Errc::NotInvertible, a.to_string() + " is a zero divisor");
        const Scalar det_inv = det.inverse();
        for (auto& c : adj_col) c = c * det_inv;
        return ext(r, std::move(adj_col));
      }
      case RingKind::Polynomial: {
        const auto& t = a.terms();
        if (t.empty()) throw Error(Errc::DivisionByZero, "inverse of the zero polynomial");
        if (t.size() != 1 || t[0].mono.degree != 0)
          throw Error(Errc::NotInvertible, "non-constant polynomial is not a unit");
        return poly(r, {{Monomial{}, t[0].coef.inverse()}});
      }
      case RingKind::RationalFunctions:
        if (a.numerator().empty()) throw Error(Errc::DivisionByZero, "inverse of the zero rational function");
        return ratfunc(r, a.denominator(), a.numerator());
    }
    throw Error(Errc::Unsupported, "inverse");
  }

  static bool equal(const Scalar& a, const Scalar& b) {
    switch (a.ring()->kind()) {
      case RingKind::Rationals: return a.rational() == b.rational();
      case RingKind::PrimeField: return a.residue() == b.residue();
      case RingKind::Extension:
        for (std::size_t i = 0; i < a.coeffs().size(); ++i)
          if (!(a.coeffs()[i] == b.coeffs()[i])) return false;
        return true;
      case RingKind::Polynomial: {
        const auto& ta = a.terms();
        const auto& tb = b.terms();
        if (ta.size() != tb.size()) return false;
        for (std::size_t i = 0; i < ta.size(); ++i)
          if (ta[i].mono != tb[i].mono || !(ta[i].coef == tb[i].coef)) return false;
        return true;
      }
      case RingKind::RationalFunctions:
        return a.numerator().size() == b.numerator().size() && a.denominator().size() == b.denominator().size() &&
               std::equal(a.numerator().begin(), a.numerator().end(), b.numerator().begin()) &&
               std::equal(a.denominator().begin(), a.denominator().end(), b.denominator().begin());
    }
    return false;
  }
};

Scalar Scalar::from_int(const RingPtr& ring, long value) {
  switch (ring->kind()) {
    case RingKind::Rationals: return Scalar(ring, mpq_class(value));
    case RingKind::PrimeField: return Scalar(ring, mod_reduce(mpz_class(value), ring->modulus()));
    case RingKind::Extension: {
      std::vector<Scalar> c(ring->degree(), Scalar::zero(ring->base()));
      c[0] = from_int(ring->base(), value);
      return ScalarOps::ext(ring, std::move(c));
    }
    case RingKind::Polynomial:
      if (value == 0) return ScalarOps::poly(ring, {});
      {
        Scalar c = from_int(ring->base(), value);
        if (c.is_zero()) return ScalarOps::poly(ring, {});
        return ScalarOps::poly(ring, {{Monomial{}, c}});
      }
    case RingKind::RationalFunctions:
      return ScalarOps::ratfunc(ring, {from_int(ring->base(), value)}, {one(ring->base())});
  }
  throw Error(Errc::Unsupported, "from_int");
}

Scalar Scalar::from_rational(const RingPtr& ring, const mpq_class& value) {
  switch (ring->kind()) {
    case RingKind::Rationals: {
      mpq_class v = value;
      v.canonicalize();
      return Scalar(ring, std::move(v));
    }
    case RingKind::PrimeField: {
      const auto p = ring->modulus();
      std::int64_t den = mod_reduce(value.get_den(), p);
      if (den == 0) throw Error(Errc::DivisionByZero, "denominator divisible by " + std::to_string(p));
      std::int64_t num = mod_reduce(value.get_num(), p);
      return Scalar(ring, static_cast<std::int64_t>((static_cast<__int128>(num) * mod_inverse(den, p)) % p));
    }
    default:
      return embed(from_rational(ring->prime(), value), ring);
  }
}

Scalar Scalar::generator(const RingPtr& extension) {
  if (extension->kind() != RingKind::Extension) throw Error(Errc::Unsupported, "generator of a non-extension");
  std::vector<Scalar> c(extension->degree(), zero(extension->base()));
  c[1] = one(extension->base());
  return ScalarOps::ext(extension, std::move(c));
}

Scalar Scalar::from_coeffs(const RingPtr& extension, std::vector<Scalar> coeffs) {
  if (extension->kind() != RingKind::Extension) throw Error(Errc::Unsupported, "from_coeffs on a non-extension");
  if (coeffs.size() > extension->degree()) throw Error(Errc::DimensionMismatch, "too many extension coordinates");
  for (auto& c : coeffs) c = embed(c, extension->base());
  while (coeffs.size() < extension->degree()) coeffs.push_back(zero(extension->base()));
  return ScalarOps::ext(extension, std::move(coeffs));
}

Scalar Scalar::variable(const RingPtr& poly_ring, std::size_t index) {
  if (poly_ring->kind() != RingKind::Polynomial || index >= poly_ring->nvars())
    throw Error(Errc::DimensionMismatch, "no such polynomial variable");
  return ScalarOps::poly(poly_ring, {{Monomial::variable(index), one(poly_ring->base())}});
}

Scalar Scalar::from_terms(const RingPtr& poly_ring, std::vector<PolyTerm> terms) {
  for (auto& t : terms) t.coef = embed(t.coef, poly_ring->base());
  if (poly_ring->nilpotent())
    std::erase_if(terms, [](const PolyTerm& t) { return !t.mono.squarefree(); });
  return ScalarOps::poly(poly_ring, ScalarOps::canonical_terms(std::move(terms)));
}

Scalar Scalar::fraction(const RingPtr& ratfunc_ring, std::vector<Scalar> num, std::vector<Scalar> den) {
  for (auto& c : num) c = embed(c, ratfunc_ring->base());
  for (auto& c : den) c = embed(c, ratfunc_ring->base());
  return ScalarOps::ratfunc(ratfunc_ring, std::move(num), std::move(den));
}

bool Scalar::is_zero() const {
  switch (ring_->kind()) {
    case RingKind::Rationals: return rational() == 0;
    case RingKind::PrimeField: return residue() == 0;
    case RingKind::Extension:
      return std::all_of(coeffs().begin(), coeffs().end(), [](const Scalar& c) { return c.is_zero(); });
    case RingKind::Polynomial: return terms().empty();
    case RingKind::RationalFunctions: return numerator().empty();
  }
  return false;
}

bool Scalar::is_one() const { return *this == one(ring_); }

const mpq_class& Scalar::rational() const { return std::get<mpq_class>(payload_); }
std::int64_t Scalar::residue() const { return std::get<std::int64_t>(payload_); }
const std::vector<Scalar>& Scalar::coeffs() const { return std::get<std::shared_ptr<const ExtData>>(payload_)->c; }
const std::vector<PolyTerm>& Scalar::terms() const {
  return std::get<std::shared_ptr<const PolyData>>(payload_)->terms;
}
const std::vector<Scalar>& Scalar::numerator() const {
  return std::get<std::shared_ptr<const RatFuncData>>(payload_)->num;
}
const std::vector<Scalar>& Scalar::denominator() const {
  return std::get<std::shared_ptr<const RatFuncData>>(payload_)->den;
}

Scalar Scalar::operator-() const { return ScalarOps::add(ring_, zero(ring_), *this, true); }

Scalar Scalar::inverse() const { return ScalarOps::inverse(*this); }

Scalar Scalar::pow(unsigned exponent) const {
  Scalar result = one(ring_);
  Scalar base = *this;
  while (exponent) {
    if (exponent & 1u) result = result * base;
    exponent >>= 1u;
    if (exponent) base = base * base;
  }
  return result;
}

bool Scalar::is_constant() const {
  if (ring_->kind() != RingKind::Polynomial) return true;
  const auto& t = terms();
  return t.empty() || (t.size() == 1 && t[0].mono.degree == 0);
}

Scalar Scalar::constant_term() const {
  if (ring_->kind() != RingKind::Polynomial) return *this;
  const auto& t = terms();
  if (!t.empty() && t[0].mono.degree == 0) return t[0].coef;
  return zero(ring_->base());
}

namespace {

bool atomic(const Scalar& c) {
  return c.ring()->kind() == RingKind::Rationals || c.ring()->kind() == RingKind::PrimeField;
}

// Renders sum of coef*mono pieces in a syntax the scalar parser reads back.
std::string render_sum(const std::vector<std::pair<Scalar, std::string>>& pieces) {
  if (pieces.empty()) return "0";
  std::string out;
  for (const auto& [coef, mono] : pieces) {
    std::string cs = coef.to_string();
    std::string piece;
    if (mono.empty()) {
      piece = atomic(coef) || pieces.size() == 1 ? cs : "(" + cs + ")";
    } else if (cs == "1") {
      piece = mono;
    } else if (cs == "-1") {
      piece = "-" + mono;
    } else if (atomic(coef)) {
      if (cs.find('/') != std::string::npos)
        piece = "(" + cs + ")*" + mono;
      else
        piece = cs + "*" + mono;
    } else {
      piece = "(" + cs + ")*" + mono;
    }
    if (!out.empty() && piece[0] != '-') out += "+";
    out += piece;
  }
  return out;
}

std::string power_name(const std::string& name, std::size_t e) {
  return e == 1 ? name : name + "^" + std::to_string(e);
}

std::string upoly_string(const upoly::UPoly& p, const std::string& var) {
  std::vector<std::pair<Scalar, std::string>> pieces;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!p[i].is_zero()) pieces.emplace_back(p[i], i == 0 ? "" : power_name(var, i));
  return render_sum(pieces);
}

}  // namespace

namespace {

std::string modulus_string(const std::vector<Scalar>& lower, const std::string& gen) {
  std::vector<std::pair<Scalar, std::string>> pieces;
  pieces.emplace_back(Scalar::one(lower[0].ring()), power_name(gen, lower.size()));
  for (std::size_t i = lower.size(); i-- > 0;)
    if (!lower[i].is_zero()) pieces.emplace_back(lower[i], i == 0 ? "" : power_name(gen, i));
  return render_sum(pieces);
}

bool needs_parens(const std::string& s) {
  return s.find_first_of("+-/", 1) != std::string::npos;
}

}  // namespace

std::string Scalar::to_string() const {
  if (!ring_) return "<unset>";
  switch (ring_->kind()) {
    case RingKind::Rationals: return rational().get_str();
    case RingKind::PrimeField: return std::to_string(residue());
    case RingKind::Extension: return upoly_string(coeffs(), ring_->generator_name());
    case RingKind::Polynomial: {
      std::vector<std::pair<Scalar, std::string>> pieces;
      for (const auto& t : terms()) {
        std::string mono;
        for (std::size_t i = 0; i < t.mono.degree;) {
          std::size_t j = i;
          while (j < t.mono.degree && t.mono.vars[j] == t.mono.vars[i]) ++j;
          if (!mono.empty()) mono += "*";
          mono += power_name(ring_->names()[t.mono.vars[i]], j - i);
          i = j;
        }
        pieces.emplace_back(t.coef, mono);
      }
      return render_sum(pieces);
    }
    case RingKind::RationalFunctions: {
      std::string num = upoly_string(numerator(), ring_->generator_name());
      if (denominator().size() == 1) return num;
      std::string den = upoly_string(denominator(), ring_->generator_name());
      return (needs_parens(num) ? "(" + num + ")" : num) + "/" + (needs_parens(den) || den.find('*') != std::string::npos ? "(" + den + ")" : den);
    }
  }
  return "?";
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.ring() == b.ring() || same_ring(a.ring(), b.ring())) return ScalarOps::add(a.ring(), a, b, false);
  RingPtr r = join(a.ring(), b.ring());
  return ScalarOps::add(r, embed(a, r), embed(b, r), false);
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  if (a.ring() == b.ring() || same_ring(a.ring(), b.ring())) return ScalarOps::add(a.ring(), a, b, true);
  RingPtr r = join(a.ring(), b.ring());
  return ScalarOps::add(r, embed(a, r), embed(b, r), true);
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  if (a.ring() == b.ring() || same_ring(a.ring(), b.ring())) return ScalarOps::mul(a.ring(), a, b);
  // Scaling by a constant from a subring avoids embedding it first.
  if (b.ring()->kind() == RingKind::Polynomial && embeds(*a.ring(), *b.ring()->base())) {
    if (a.is_zero()) return Scalar::zero(b.ring());
    std::vector<PolyTerm> out;
    out.reserve(b.terms().size());
    for (const auto& t : b.terms()) {
      Scalar c = a * t.coef;
      if (!c.is_zero()) out.push_back({t.mono, std::move(c)});
    }
    return ScalarOps::poly(b.ring(), std::move(out));
  }
  if (a.ring()->kind() == RingKind::Polynomial && embeds(*b.ring(), *a.ring()->base())) return b * a;
  RingPtr r = join(a.ring(), b.ring());
  return ScalarOps::mul(r, embed(a, r), embed(b, r));
}

Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }

bool operator==(const Scalar& a, const Scalar& b) {
  if (!a.valid() || !b.valid()) return a.valid() == b.valid();
  if (a.ring() == b.ring() || same_ring(a.ring(), b.ring())) return ScalarOps::equal(a, b);
  RingPtr r = join(a.ring(), b.ring());
  return ScalarOps::equal(embed(a, r), embed(b, r));
}

Scalar operator*(long a, const Scalar& b) { return Scalar::from_int(b.ring(), a) * b; }
Scalar operator+(const Scalar& a, long b) { return a + Scalar::from_int(a.ring(), b); }
Scalar operator-(const Scalar& a, long b) { return a - Scalar::from_int(a.ring(), b); }

Scalar embed(const Scalar& x, const RingPtr& to) {
  const RingPtr& from = x.ring();
  if (from == to) return x;
  if (same_ring(*from, *to)) return ScalarOps::make(to, ScalarOps::payload(x));
  switch (to->kind()) {
    case RingKind::Rationals:
    case RingKind::PrimeField:
      break;
    case RingKind::Extension:
      if (from->kind() == RingKind::Extension && embeds(*from, *to) && from->degree() == to->degree() &&
          from->generator_name() == to->generator_name() && embeds(*from->base(), *to->base()) &&
          !embeds(*from, *to->base()))
        return ScalarOps::ext(to, embed_all(x.coeffs(), to->base()));
      if (embeds(*from, *to->base())) {
        std::vector<Scalar> c(to->degree(), Scalar::zero(to->base()));
        c[0] = embed(x, to->base());
        return ScalarOps::ext(to, std::move(c));
      }
      break;
    case RingKind::Polynomial:
      if (from->kind() == RingKind::Polynomial && from->names() == to->names() &&
          from->nilpotent() == to->nilpotent() && embeds(*from->base(), *to->base())) {
        std::vector<PolyTerm> t;
        t.reserve(x.terms().size());
        for (const auto& term : x.terms()) t.push_back({term.mono, embed(term.coef, to->base())});
        return ScalarOps::poly(to, std::move(t));
      }
      if (embeds(*from, *to->base())) {
        if (x.is_zero()) return ScalarOps::poly(to, {});
        return ScalarOps::poly(to, {{Monomial{}, embed(x, to->base())}});
      }
      break;
    case RingKind::RationalFunctions:
      if (from->kind() == RingKind::RationalFunctions && from->generator_name() == to->generator_name() &&
          embeds(*from->base(), *to->base()))
        return ScalarOps::ratfunc(to, embed_all(x.numerator(), to->base()), embed_all(x.denominator(), to->base()));
      if (embeds(*from, *to->base()))
        return ScalarOps::ratfunc(to, {embed(x, to->base())}, {Scalar::one(to->base())});
      break;
  }
  throw Error(Errc::IncompatibleParents, "cannot embed " + from->to_string() + " into " + to->to_string());
}

Scalar ext_coeff(const Scalar& x, std::size_t i) {
  if (x.ring()->kind() != RingKind::Extension) throw Error(Errc::Unsupported, "not an extension element");
  return i < x.coeffs().size() ? x.coeffs()[i] : Scalar::zero(x.ring()->base());
}

Scalar ext_conj(const Scalar& x) {
  const RingPtr& r = x.ring();
  if (r->kind() != RingKind::Extension || r->degree() != 2)
    throw Error(Errc::Unsupported, "conjugation needs a quadratic extension");
  const Scalar& a = x.coeffs()[0];
  const Scalar& b = x.coeffs()[1];
  return Scalar::from_coeffs(r, {a - r->lower()[1] * b, -b});
}

Scalar ext_trace(const Scalar& x) {
  const RingPtr& r = x.ring();
  if (r->kind() != RingKind::Extension || r->degree() != 2)
    throw Error(Errc::Unsupported, "trace needs a quadratic extension");
  const Scalar& a = x.coeffs()[0];
  const Scalar& b = x.coeffs()[1];
  return 2 * a - r->lower()[1] * b;
}

Scalar ext_norm(const Scalar& x) {
  const RingPtr& r = x.ring();
  if (r->kind() != RingKind::Extension || r->degree() != 2)
    throw Error(Errc::Unsupported, "norm needs a quadratic extension");
  const Scalar& a = x.coeffs()[0];
  const Scalar& b = x.coeffs()[1];
  return a * a - r->lower()[1] * a * b + r->lower()[0] * b * b;
}

std::pair<Scalar, Scalar> split_components(const Scalar& x) {
  // x = a + b e with e^2 = e corresponds to (a + b, a).
  const Scalar& a = x.coeffs()[0];
  const Scalar& b = x.coeffs()[1];
  return {a + b, a};
}

Scalar split_from_components(const RingPtr& split, const Scalar& alpha, const Scalar& beta) {
  return Scalar::from_coeffs(split, {beta, alpha - beta});
}

Scalar ratfunc_eval(const Scalar& r, const Scalar& point) {
  if (r.ring()->kind() != RingKind::RationalFunctions) throw Error(Errc::Unsupported, "not a rational function");
  const RingPtr& k = r.ring()->base();
  const Scalar pt = embed(point, k);
  const Scalar den = upoly::eval(r.denominator(), pt, k);
  if (den.is_zero()) throw Error(Errc::PoleAtPoint, r.to_string() + " at " + pt.to_string());
  return upoly::eval(r.numerator(), pt, k) / den;
}

Scalar ratfunc_from_poly(const RingPtr& ratfunc_ring, std::vector<Scalar> coeffs) {
  return Scalar::fraction(ratfunc_ring, std::move(coeffs), {Scalar::one(ratfunc_ring->base())});
}

Scalar ratfunc_variable(const RingPtr& ratfunc_ring) {
  return ratfunc_from_poly(ratfunc_ring, {Scalar::zero(ratfunc_ring->base()), Scalar::one(ratfunc_ring->base())});
}

Scalar poly_substitute(const Scalar& p, std::span<const Scalar> values) {
  if (p.ring()->kind() != RingKind::Polynomial) throw Error(Errc::Unsupported, "substitution into a non-polynomial");
  if (values.size() != p.ring()->nvars()) throw Error(Errc::DimensionMismatch, "substitution arity");
  RingPtr target = common_ring(values);
  target = join(target, p.ring()->base());
  Scalar acc = Scalar::zero(target);
  for (const auto& t : p.terms()) {
    Scalar v = embed(t.coef, target);
    for (std::size_t i = 0; i < t.mono.degree; ++i) v = v * values[t.mono.vars[i]];
    acc = acc + v;
  }
  return acc;
}

std::size_t poly_total_degree(const Scalar& p) {
  std::size_t d = 0;
  for (const auto& t : p.terms()) d = std::max<std::size_t>(d, t.mono.degree);
  return d;
}

}  // namespace albert
