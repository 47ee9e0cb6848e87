#include <albert/deg3.hpp>

namespace albert {

namespace {

bool is_unit(const Scalar& s) {
  if (s.is_zero()) return false;
  try {
    (void)s.inverse();
    return true;
  } catch (const Error&) {
    return false;
  }
}

bool is_split_ring(const Ring& r) {
  return r.kind() == RingKind::Extension && r.degree() == 2 && r.lower()[0].is_zero() &&
         (r.lower()[1] + 1).is_zero() && r.generator_name() == "e";
}

// (a0 + a1 x + a2 x^2)(b0 + b1 x + b2 x^2) mod x^3 + c2 x^2 + c1 x + c0.
Vec mulmod3(const Vec& a, const Vec& b, const Vec& lower) {
  Vec p(5);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      Scalar t = a[i] * b[j];
      p[i + j] = p[i + j].valid() ? p[i + j] + t : t;
    }
  for (std::size_t k = 4; k >= 3; --k) {
    if (p[k].is_zero()) continue;
    for (std::size_t j = 0; j < 3; ++j) p[k - 3 + j] = p[k - 3 + j] - p[k] * lower[j];
  }
  p.resize(3);
  return p;
}

Vec slice(const Vec& v, std::size_t from, std::size_t n) { return Vec(v.begin() + from, v.begin() + from + n); }

Scalar cubic_discriminant(const Vec& lower) {
  const Scalar& d = lower[0];
  const Scalar& c = lower[1];
  const Scalar& b = lower[2];
  return b * b * c * c - 4 * c * c * c - 4 * b * b * b * d - 27 * d * d + 18 * b * c * d;
}

std::optional<Scalar> base_sqrt(const Scalar& a) {
  const RingPtr& k = a.ring();
  if (k->kind() == RingKind::Rationals) {
    const mpq_class& q = a.rational();
    if (q < 0) return std::nullopt;
    mpz_class n = q.get_num(), d = q.get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
    return Scalar::from_rational(k, mpq_class(rn, rd));
  }
  if (k->kind() == RingKind::PrimeField) {
    if (k->modulus() > (1 << 22)) throw Error(Errc::Unsupported, "square roots in large prime fields");
    for (long x = 0; x < k->modulus(); ++x) {
      Scalar s = Scalar::from_int(k, x);
      if (s * s == a) return s;
    }
    return std::nullopt;
  }
  throw Error(Errc::Unsupported, "square roots over " + k->to_string());
}


}  // namespace

// ---------------------------------------------------------------- algebra

AlgebraPtr Algebra::cubic_etale(const RingPtr& k, std::vector<Scalar> lower, std::string gen) {
  if (lower.size() != 3) throw Error(Errc::DimensionMismatch, "cubic etale algebra needs a cubic");
  auto a = std::shared_ptr<Algebra>(new Algebra);
  a->kind_ = AlgebraKind::CubicEtale;
  a->base_ = k;
  a->etale_ = Ring::extension(k, std::move(lower), std::move(gen));  // separability check
  return a;
}

AlgebraPtr Algebra::matrix3(const RingPtr& r) {
  auto a = std::shared_ptr<Algebra>(new Algebra);
  a->kind_ = AlgebraKind::Matrix3;
  a->base_ = r;
  return a;
}

AlgebraPtr Algebra::cyclic(const RingPtr& l, const Scalar& rho_image, const Scalar& b) {
  if (l->kind() != RingKind::Extension || l->degree() != 3)
    throw Error(Errc::InvalidAutomorphism, "cyclic algebras need a cubic extension L of k");
  const RingPtr& k = l->base();
  const Scalar bk = embed(b, k);
  if (bk.is_zero()) throw Error(Errc::ZeroParameter, "cyclic algebra needs b != 0");
  const Scalar r = embed(rho_image, l);
  const Scalar x = Scalar::generator(l);
  if (r == x) throw Error(Errc::InvalidAutomorphism, "rho is the identity");
  const Scalar fr = r * r * r + l->lower()[2] * r * r + l->lower()[1] * r + l->lower()[0];
  if (!fr.is_zero()) throw Error(Errc::InvalidAutomorphism, "rho(x) = " + r.to_string() + " is not a root of the modulus");
  std::vector<Vec> cols;
  Scalar pw = Scalar::one(l);
  for (int j = 0; j < 3; ++j) {
    cols.push_back(pw.coeffs());
    pw = pw * r;
  }
  Matrix rho = Matrix::from_columns(cols);
  const Vec xc = x.coeffs();
  if (!vec_equal(rho.apply(rho.apply(rho.apply(xc))), xc))
    throw Error(Errc::InvalidAutomorphism, "rho does not have order 3");
  auto a = std::shared_ptr<Algebra>(new Algebra);
  a->kind_ = AlgebraKind::Cyclic;
  a->base_ = k;
  a->etale_ = l;
  a->rho_ = std::move(rho);
  a->b_ = bk;
  return a;
}

AlgebraPtr Algebra::prodop(const AlgebraPtr& inner) {
  if (inner->kind() == AlgebraKind::ProdOp) throw Error(Errc::Unsupported, "nested products with the opposite");
  auto a = std::shared_ptr<Algebra>(new Algebra);
  a->kind_ = AlgebraKind::ProdOp;
  a->base_ = inner->base();
  a->inner_ = inner;
  a->split_ = Ring::split_quadratic(inner->norm_ring());
  return a;
}

Scalar Algebra::cyclic_generator_image(const RingPtr& l, int index) {
  if (l->kind() != RingKind::Extension || l->degree() != 3)
    throw Error(Errc::InvalidAutomorphism, "rho index needs a cubic extension");
  if (index != 1 && index != 2) throw Error(Errc::InvalidAutomorphism, "rho index must be 1 or 2");
  if (l->characteristic() == 2) throw Error(Errc::Unsupported, "rho index in characteristic 2; give rho(x) explicitly");
  const Vec& c = l->lower();
  const auto delta = base_sqrt(cubic_discriminant(c));
  if (!delta) throw Error(Errc::InvalidAutomorphism, "discriminant is not a square, so L/k is not cyclic");
  // f(y) = (y - x) g(y), g = y^2 + B y + C, and disc(g) = disc(f) / f'(x)^2.
  const Scalar x = Scalar::generator(l);
  const Scalar B = embed(c[2], l) + x;
  const Scalar fprime = 3 * x * x + 2 * embed(c[2], l) * x + embed(c[1], l);
  const Scalar half = Scalar::from_rational(l, mpq_class(1, 2));
  Scalar r = half * (-B + embed(*delta, l) / fprime);
  if (index == 2) {
    // rho(rho(x)) = r evaluated at r.
    const Vec rc = r.coeffs();
    r = embed(rc[0], l) + embed(rc[1], l) * r + embed(rc[2], l) * r * r;
  }
  return r;
}

std::size_t Algebra::dim() const {
  switch (kind_) {
    case AlgebraKind::CubicEtale: return 3;
    case AlgebraKind::Matrix3: return 9;
    case AlgebraKind::Cyclic: return 9;
    case AlgebraKind::ProdOp: return 2 * inner_->dim();
  }
  return 0;
}

RingPtr Algebra::norm_ring() const { return kind_ == AlgebraKind::ProdOp ? split_ : base_; }

std::string Algebra::to_string() const {
  switch (kind_) {
    case AlgebraKind::CubicEtale: return "cubic_etale(" + etale_->to_string() + ")";
    case AlgebraKind::Matrix3: return "matrix3(" + base_->to_string() + ")";
    case AlgebraKind::Cyclic: {
      Scalar r = Scalar::from_coeffs(etale_, rho_.column(1));
      return "cyclic(" + etale_->to_string() + ", rho=" + r.to_string() + ", b=" + b_.to_string() + ")";
    }
    case AlgebraKind::ProdOp: return "prodop(" + inner_->to_string() + ")";
  }
  return "?";
}

// ---------------------------------------------------------------- elements

RingPtr Deg3Element::ring() const { return c.empty() ? alg->base() : c[0].ring(); }

Deg3Element make_element(const AlgebraPtr& alg, Vec coords) {
  if (coords.size() != alg->dim())
    throw Error(Errc::DimensionMismatch, alg->to_string() + " expects " + std::to_string(alg->dim()) + " coordinates, got " +
                                             std::to_string(coords.size()));
  RingPtr r = alg->base();
  for (const auto& x : coords)
    if (x.ring() != r && !same_ring(x.ring(), r)) r = join(r, x.ring());
  for (auto& x : coords)
    if (x.ring() != r) x = embed(x, r);
  return {alg, std::move(coords)};
}

Deg3Element d3_zero(const AlgebraPtr& alg, const RingPtr& ring) {
  return make_element(alg, zero_vector(join(alg->base(), ring), alg->dim()));
}

Deg3Element d3_one(const AlgebraPtr& alg, const RingPtr& ring) {
  const RingPtr r = join(alg->base(), ring);
  Vec c = zero_vector(r, alg->dim());
  switch (alg->kind()) {
    case AlgebraKind::CubicEtale:
    case AlgebraKind::Cyclic:
      c[0] = Scalar::one(r);
      break;
    case AlgebraKind::Matrix3:
      c[0] = c[4] = c[8] = Scalar::one(r);
      break;
    case AlgebraKind::ProdOp: {
      const Vec one = d3_one(alg->inner(), r).c;
      std::copy(one.begin(), one.end(), c.begin());
      std::copy(one.begin(), one.end(), c.begin() + static_cast<long>(one.size()));
      break;
    }
  }
  return make_element(alg, std::move(c));
}

Deg3Element d3_one(const AlgebraPtr& alg) { return d3_one(alg, alg->base()); }

Deg3Element d3_central(const AlgebraPtr& alg, const Scalar& s) { return s * d3_one(alg, alg->base()); }

Deg3Element operator+(const Deg3Element& a, const Deg3Element& b) {
  if (a.alg != b.alg) throw Error(Errc::IncompatibleParents, "elements of different algebras");
  return make_element(a.alg, vec_add(a.c, b.c));
}

Deg3Element operator-(const Deg3Element& a, const Deg3Element& b) {
  if (a.alg != b.alg) throw Error(Errc::IncompatibleParents, "elements of different algebras");
  return make_element(a.alg, vec_sub(a.c, b.c));
}

Deg3Element operator-(const Deg3Element& a) { return {a.alg, vec_neg(a.c)}; }

namespace {

Vec cyclic_mul(const Algebra& alg, const Vec& a, const Vec& b) {
  const Vec& lower = alg.etale()->lower();
  const Matrix& rho = alg.rho();
  const Matrix rho2 = rho * rho;
  Vec out(9);
  for (std::size_t i = 0; i < 3; ++i) {
    const Vec li = slice(a, 3 * i, 3);
    if (vec_is_zero(li)) continue;
    for (std::size_t j = 0; j < 3; ++j) {
      Vec mj = slice(b, 3 * j, 3);
      if (vec_is_zero(mj)) continue;
      // (l z^i)(m z^j) = l rho^i(m) z^{i+j}, z^3 = b.
      if (i == 1) mj = rho.apply(mj);
      if (i == 2) mj = rho2.apply(mj);
      Vec p = mulmod3(li, mj, lower);
      std::size_t e = i + j;
      if (e >= 3) {
        p = vec_scale(alg.cyclic_b(), p);
        e -= 3;
      }
      for (std::size_t t = 0; t < 3; ++t) out[3 * e + t] = out[3 * e + t].valid() ? out[3 * e + t] + p[t] : p[t];
    }
  }
  const RingPtr r = common_ring(a);
  for (auto& x : out)
    if (!x.valid()) x = Scalar::zero(r);
  return out;
}

}  // namespace

Deg3Element operator*(const Deg3Element& a, const Deg3Element& b) {
  if (a.alg != b.alg) throw Error(Errc::IncompatibleParents, "elements of different algebras");
  const AlgebraPtr& alg = a.alg;
  switch (alg->kind()) {
    case AlgebraKind::CubicEtale:
      return make_element(alg, mulmod3(a.c, b.c, alg->etale()->lower()));
    case AlgebraKind::Matrix3: {
      Vec out(9);
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
          out[3 * i + j] = a.c[3 * i] * b.c[j] + a.c[3 * i + 1] * b.c[3 + j] + a.c[3 * i + 2] * b.c[6 + j];
      return make_element(alg, std::move(out));
    }
    case AlgebraKind::Cyclic:
      return make_element(alg, cyclic_mul(*alg, a.c, b.c));
    case AlgebraKind::ProdOp: {
      auto [x1, y1] = pair_components(a);
      auto [x2, y2] = pair_components(b);
      return pair_element(alg, x1 * x2, y2 * y1);
    }
  }
  throw Error(Errc::Unsupported, "mul");
}

Deg3Element operator*(const Scalar& s, const Deg3Element& a) {
  if (a.alg->kind() == AlgebraKind::ProdOp && is_split_ring(*s.ring()) && !embeds(*s.ring(), *a.ring())) {
    auto [alpha, beta] = split_components(s);
    auto [x, y] = pair_components(a);
    return pair_element(a.alg, alpha * x, beta * y);
  }
  return make_element(a.alg, vec_scale(s, a.c));
}

bool operator==(const Deg3Element& a, const Deg3Element& b) { return a.alg == b.alg && vec_equal(a.c, b.c); }

Deg3Element pair_element(const AlgebraPtr& prodop, const Deg3Element& x, const Deg3Element& y) {
  if (prodop->kind() != AlgebraKind::ProdOp) throw Error(Errc::Unsupported, "pair_element on a non-product");
  Vec c = x.c;
  c.insert(c.end(), y.c.begin(), y.c.end());
  return make_element(prodop, std::move(c));
}

std::pair<Deg3Element, Deg3Element> pair_components(const Deg3Element& a) {
  const std::size_t n = a.alg->inner()->dim();
  return {make_element(a.alg->inner(), slice(a.c, 0, n)), make_element(a.alg->inner(), slice(a.c, n, n))};
}

CharData char_data(const Deg3Element& a, bool with_norm) {
  const AlgebraPtr& alg = a.alg;
  switch (alg->kind()) {
    case AlgebraKind::CubicEtale: {
      const Vec& lower = alg->etale()->lower();
      const RingPtr r = a.ring();
      std::vector<Vec> cols;
      for (std::size_t j = 0; j < 3; ++j) cols.push_back(mulmod3(a.c, unit_vector(r, 3, j), lower));
      return char_data3(Matrix::from_columns(cols), with_norm);
    }
    case AlgebraKind::Matrix3:
      return char_data3(mat3_matrix(a), with_norm);
    case AlgebraKind::Cyclic: {
      const RingPtr r = a.ring();
      const RingPtr lr = base_change(alg->etale(), alg->base(), r);
      const Matrix& rho = alg->rho();
      const Matrix rho2 = rho * rho;
      auto lift = [&](const Vec& v) { return Scalar::from_coeffs(lr, v); };
      const Scalar zero = Scalar::zero(lr);
      const Scalar b = embed(alg->cyclic_b(), lr);
      Matrix phi = Matrix::zero(lr, 3, 3);
      for (std::size_t i = 0; i < 3; ++i) {
        const Vec li = slice(a.c, 3 * i, 3);
        // Lambda(l) = diag(l, rho^2 l, rho l); phi(l z^i) = Lambda(l) Z^i.
        const Scalar d0 = lift(li), d1 = lift(rho2.apply(li)), d2 = lift(rho.apply(li));
        if (i == 0) {
          phi(0, 0) = phi(0, 0) + d0;
          phi(1, 1) = phi(1, 1) + d1;
          phi(2, 2) = phi(2, 2) + d2;
        } else if (i == 1) {  // Z = [[0,0,b],[1,0,0],[0,1,0]]
          phi(0, 2) = phi(0, 2) + d0 * b;
          phi(1, 0) = phi(1, 0) + d1;
          phi(2, 1) = phi(2, 1) + d2;
        } else {  // Z^2 = [[0,b,0],[0,0,b],[1,0,0]]
          phi(0, 1) = phi(0, 1) + d0 * b;
          phi(1, 2) = phi(1, 2) + d1 * b;
          phi(2, 0) = phi(2, 0) + d2;
        }
      }
      CharData cd = char_data3(phi, with_norm);
      auto down = [&](const Scalar& s) {
        if (!s.coeffs()[1].is_zero() || !s.coeffs()[2].is_zero())
          throw Error(Errc::Unsupported, "reduced characteristic data left k; rho is not an automorphism");
        return s.coeffs()[0];
      };
      return {down(cd.trace), down(cd.second), with_norm ? down(cd.norm) : Scalar::zero(a.ring())};
    }
    case AlgebraKind::ProdOp: {
      auto [x, y] = pair_components(a);
      const CharData cx = char_data(x, with_norm), cy = char_data(y, with_norm);
      const RingPtr sr = Ring::split_quadratic(join(cx.norm.ring(), cy.norm.ring()));
      return {split_from_components(sr, cx.trace, cy.trace), split_from_components(sr, cx.second, cy.second),
              split_from_components(sr, cx.norm, cy.norm)};
    }
  }
  throw Error(Errc::Unsupported, "char_data");
}

Scalar reduced_trace(const Deg3Element& a) {
  if (a.alg->kind() == AlgebraKind::Matrix3) return a.c[0] + a.c[4] + a.c[8];
  if (a.alg->kind() == AlgebraKind::ProdOp) return char_data(a, false).trace;
  // T is linear: weight each coordinate by the trace of its basis element so
  // that symbolic inputs never get multiplied together.
  const RingPtr& k = a.alg->base();
  Scalar t = Scalar::zero(a.ring());
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i].is_zero()) continue;
    const Scalar ti = char_data(make_element(a.alg, unit_vector(k, a.alg->dim(), i)), false).trace;
    if (!ti.is_zero()) t = t + a.c[i] * ti;
  }
  return t;
}

Scalar reduced_norm(const Deg3Element& a) {
  if (a.alg->kind() == AlgebraKind::Matrix3) return det(mat3_matrix(a));
  return char_data(a).norm;
}

Deg3Element sharp(const Deg3Element& a) {
  if (a.alg->kind() == AlgebraKind::Matrix3) {
    // Adjugate.
    const Vec& m = a.c;
    auto at = [&](std::size_t i, std::size_t j) -> const Scalar& { return m[3 * i + j]; };
    auto cof = [&](std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) {
      return at(r0, c0) * at(r1, c1) - at(r0, c1) * at(r1, c0);
    };
    Vec out{cof(1, 2, 1, 2), cof(0, 2, 2, 1), cof(0, 1, 1, 2), cof(1, 2, 2, 0), cof(0, 2, 0, 2),
            cof(0, 1, 2, 0), cof(1, 2, 0, 1), cof(0, 2, 1, 0), cof(0, 1, 0, 1)};
    return make_element(a.alg, std::move(out));
  }
  if (a.alg->kind() == AlgebraKind::ProdOp) {
    auto [x, y] = pair_components(a);
    return pair_element(a.alg, sharp(x), sharp(y));
  }
  const CharData cd = char_data(a, false);
  return a * a - cd.trace * a + cd.second * d3_one(a.alg, a.ring());
}

bool is_invertible(const Deg3Element& a) { return is_unit(reduced_norm(a)); }

Deg3Element inverse(const Deg3Element& a) {
  const Scalar n = reduced_norm(a);
  if (!is_unit(n)) throw Error(Errc::NotInvertible, "reduced norm " + n.to_string() + " is not a unit");
  return n.inverse() * sharp(a);
}

std::optional<Scalar> as_central(const Deg3Element& a) {
  switch (a.alg->kind()) {
    case AlgebraKind::CubicEtale:
    case AlgebraKind::Cyclic:
      for (std::size_t i = 1; i < a.c.size(); ++i)
        if (!a.c[i].is_zero()) return std::nullopt;
      return a.c[0];
    case AlgebraKind::Matrix3:
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
          if (i != j && !a.c[3 * i + j].is_zero()) return std::nullopt;
      if (!(a.c[0] == a.c[4]) || !(a.c[0] == a.c[8])) return std::nullopt;
      return a.c[0];
    case AlgebraKind::ProdOp: {
      auto [x, y] = pair_components(a);
      auto cx = as_central(x), cy = as_central(y);
      if (!cx || !cy) return std::nullopt;
      return split_from_components(Ring::split_quadratic(join(cx->ring(), cy->ring())), *cx, *cy);
    }
  }
  return std::nullopt;
}

Deg3Element mat3(const AlgebraPtr& alg, const Matrix& m) {
  if (alg->kind() != AlgebraKind::Matrix3 || m.rows() != 3 || m.cols() != 3)
    throw Error(Errc::DimensionMismatch, "mat3 needs a 3x3 matrix and a matrix3 algebra");
  Vec c;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) c.push_back(m(i, j));
  return make_element(alg, std::move(c));
}

Matrix mat3_matrix(const Deg3Element& a) {
  if (a.alg->kind() != AlgebraKind::Matrix3) throw Error(Errc::Unsupported, "not a matrix3 element");
  Matrix m(3, 3, Scalar());
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) m(i, j) = a.c[3 * i + j];
  return m;
}

Deg3Element diag3(const AlgebraPtr& alg, const Scalar& a, const Scalar& b, const Scalar& c) {
  const RingPtr r = alg->base();
  Vec v = zero_vector(r, 9);
  v[0] = a;
  v[4] = b;
  v[8] = c;
  return make_element(alg, std::move(v));
}

Deg3Element unit_e(const AlgebraPtr& alg, std::size_t i, std::size_t j) {
  Vec v = zero_vector(alg->base(), 9);
  v[3 * i + j] = Scalar::one(alg->base());
  return make_element(alg, std::move(v));
}

Deg3Element transvection(const AlgebraPtr& alg, std::size_t i, std::size_t j, const Scalar& alpha) {
  if (i == j || i > 2 || j > 2) throw Error(Errc::DimensionMismatch, "transvection indices");
  Deg3Element e = d3_one(alg, alpha.ring());
  Vec c = e.c;
  c[3 * i + j] = c[3 * i + j] + alpha;
  return make_element(alg, std::move(c));
}

RingPtr base_change(const RingPtr& r, const RingPtr& k, const RingPtr& s) {
  if (embeds(*r, *s)) return s;
  if (same_ring(r, k)) return join(k, s);
  if (r->kind() == RingKind::Extension && same_ring(r->base(), k))
    return Ring::extension(s, embed_all(r->lower(), s), r->generator_name());
  throw Error(Errc::IncompatibleParents, "cannot extend scalars of " + r->to_string() + " to " + s->to_string());
}

std::size_t flat_dim(const AlgebraPtr& alg, const RingPtr& k) {
  if (same_ring(alg->base(), k)) return alg->dim();
  if (alg->base()->kind() == RingKind::Extension && same_ring(alg->base()->base(), k))
    return alg->dim() * alg->base()->degree();
  throw Error(Errc::IncompatibleParents, alg->to_string() + " is not defined over an extension of " + k->to_string());
}

Vec flatten(const Deg3Element& a, const RingPtr& k) {
  const RingPtr& base = a.alg->base();
  if (same_ring(base, k)) return a.c;
  flat_dim(a.alg, k);
  Vec out;
  out.reserve(a.c.size() * base->degree());
  for (const auto& x : a.c)
    for (std::size_t i = 0; i < base->degree(); ++i) out.push_back(ext_coeff(x, i));
  return out;
}

Deg3Element unflatten(const AlgebraPtr& alg, const RingPtr& k, const Vec& coords) {
  const std::size_t n = flat_dim(alg, k);
  if (coords.size() != n) throw Error(Errc::DimensionMismatch, "flat coordinate count");
  const RingPtr& base = alg->base();
  if (same_ring(base, k)) return make_element(alg, coords);
  RingPtr s = k;
  for (const auto& x : coords)
    if (x.ring() != s && !same_ring(x.ring(), s)) s = join(s, x.ring());
  const RingPtr ext = base_change(base, k, s);
  const std::size_t m = base->degree();
  Vec c;
  c.reserve(alg->dim());
  for (std::size_t i = 0; i < alg->dim(); ++i) c.push_back(Scalar::from_coeffs(ext, slice(coords, i * m, m)));
  return make_element(alg, std::move(c));
}

// ---------------------------------------------------------------- involutions

Scalar center_conj(const Scalar& kappa) {
  if (kappa.ring()->kind() == RingKind::Extension && kappa.ring()->degree() == 2) return ext_conj(kappa);
  return kappa;
}

Scalar center_trace(const Scalar& kappa) {
  if (kappa.ring()->kind() == RingKind::Extension && kappa.ring()->degree() == 2) return ext_trace(kappa);
  return 2 * kappa;
}

std::optional<Scalar> center_to_base(const Scalar& kappa) {
  if (kappa.ring()->kind() == RingKind::Extension && kappa.ring()->degree() == 2) {
    if (!kappa.coeffs()[1].is_zero()) return std::nullopt;
    return kappa.coeffs()[0];
  }
  return kappa;
}

InvolutionPtr Involution::switch_involution(const AlgebraPtr& prodop) {
  if (prodop->kind() != AlgebraKind::ProdOp)
    throw Error(Errc::InvalidInvolution, "switch needs D x D^op, got " + prodop->to_string());
  auto s = std::shared_ptr<Involution>(new Involution);
  s->kind_ = Kind::Switch;
  s->alg_ = prodop;
  return s;
}

InvolutionPtr Involution::conj_transpose(const AlgebraPtr& alg) {
  if (alg->kind() != AlgebraKind::Matrix3 || alg->base()->kind() != RingKind::Extension || alg->base()->degree() != 2)
    throw Error(Errc::InvalidInvolution, "conjtrans needs matrix3 over a quadratic extension, got " + alg->to_string());
  auto s = std::shared_ptr<Involution>(new Involution);
  s->kind_ = Kind::ConjTranspose;
  s->alg_ = alg;
  return s;
}

InvolutionPtr Involution::utwist(const InvolutionPtr& base, const Deg3Element& u) {
  if (u.alg != base->algebra()) throw Error(Errc::IncompatibleParents, "twist element from another algebra");
  if (!(base->apply(u) == u)) throw Error(Errc::InvalidInvolution, "twist element is not symmetric: sigma(u) != u");
  if (!is_invertible(u)) throw Error(Errc::NotInvertible, "twist element is not invertible");
  auto s = std::shared_ptr<Involution>(new Involution);
  s->kind_ = Kind::UTwist;
  s->alg_ = base->algebra();
  s->base_ = base;
  s->u_ = u;
  s->u_inv_ = inverse(u);
  return s;
}

Deg3Element Involution::apply(const Deg3Element& a) const {
  if (a.alg != alg_) throw Error(Errc::NoInvolutionAttached, "involution belongs to " + alg_->to_string());
  switch (kind_) {
    case Kind::Switch: {
      auto [x, y] = pair_components(a);
      return pair_element(alg_, y, x);
    }
    case Kind::ConjTranspose: {
      Vec c(9);
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) c[3 * i + j] = ext_conj(a.c[3 * j + i]);
      return make_element(alg_, std::move(c));
    }
    case Kind::UTwist:
      return *u_ * base_->apply(a) * *u_inv_;
  }
  throw Error(Errc::Unsupported, "involution");
}

std::string Involution::to_string() const {
  switch (kind_) {
    case Kind::Switch: return "switch";
    case Kind::ConjTranspose: return "conjtrans";
    case Kind::UTwist: return "utwist(" + base_->to_string() + ", u=" + vec_to_string(u_->c) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------- groups

MembershipResult membership(const Deg3Element& g, Group which, const InvolutionPtr& sigma) {
  if (which != Group::SL1 && !sigma) throw Error(Errc::NoInvolutionAttached, "U, SU and Sim need an involution");
  if (!is_invertible(g)) return {};
  const auto norm_one = [&] { return reduced_norm(g).is_one(); };
  const auto unitary = [&] { return (g * sigma->apply(g)) == d3_one(g.alg, g.ring()); };
  switch (which) {
    case Group::SL1: return {norm_one(), std::nullopt};
    case Group::U: return {unitary(), std::nullopt};
    case Group::SU: return {unitary() && norm_one(), std::nullopt};
    case Group::Sim: {
      const auto c = as_central(g * sigma->apply(g));
      if (!c) return {};
      const auto lambda = center_to_base(*c);
      if (!lambda || lambda->is_zero()) return {};
      return {true, lambda};
    }
  }
  return {};
}

std::vector<Transvection> transvection_factorization(const Deg3Element& d) {
  if (d.alg->kind() != AlgebraKind::Matrix3) throw Error(Errc::NonSplitCoordinates, "factorization needs matrix3");
  if (!d.ring()->is_field()) throw Error(Errc::Unsupported, "factorization needs a field of coefficients");
  if (!reduced_norm(d).is_one()) throw Error(Errc::NotNormOne, "N(d) = " + reduced_norm(d).to_string());
  Matrix a = mat3_matrix(d);
  std::vector<Transvection> ops;  // row_i += alpha row_j, applied on the left
  auto op = [&](std::size_t i, std::size_t j, const Scalar& alpha) {
    if (alpha.is_zero()) return;
    for (std::size_t c = 0; c < 3; ++c) a(i, c) = a(i, c) + alpha * a(j, c);
    ops.push_back({i, j, alpha});
  };
  // Column 0.
  if (!a(0, 0).is_one()) {
    if (a(1, 0).is_zero() && a(2, 0).is_zero()) op(1, 0, Scalar::one(a(0, 0).ring()));
    const std::size_t i = a(1, 0).is_zero() ? 2 : 1;
    op(0, i, (Scalar::one(a(0, 0).ring()) - a(0, 0)) / a(i, 0));
  }
  op(1, 0, -a(1, 0));
  op(2, 0, -a(2, 0));
  // Column 1; the lower-right 2x2 block now has determinant 1.
  if (!a(1, 1).is_one()) {
    if (a(2, 1).is_zero()) op(2, 1, Scalar::one(a(1, 1).ring()));
    op(1, 2, (Scalar::one(a(1, 1).ring()) - a(1, 1)) / a(2, 1));
  }
  op(2, 1, -a(2, 1));
  op(0, 1, -a(0, 1));
  // Column 2; a(2,2) = 1 now.
  op(0, 2, -a(0, 2));
  op(1, 2, -a(1, 2));
  if (!a.is_identity()) throw Error(Errc::FactorizationMismatch, "elimination did not reach the identity");
  // L_m ... L_1 d = 1, so d = L_1^{-1} ... L_m^{-1}.
  std::vector<Transvection> out;
  out.reserve(ops.size());
  for (const auto& t : ops) out.push_back({t.i, t.j, -t.alpha});
  return out;
}

Deg3Element transvection_product(const AlgebraPtr& alg, const std::vector<Transvection>& factors) {
  Deg3Element p = d3_one(alg);
  for (const auto& t : factors) p = p * transvection(alg, t.i, t.j, t.alpha);
  return p;
}

}  // namespace albert
