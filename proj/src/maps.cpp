#include <albert/maps.hpp>

namespace albert {

namespace {

bool unit_scalar(const Scalar& s) {
  if (s.is_zero()) return false;
  try {
    (void)s.inverse();
    return true;
  } catch (const Error&) {
    return false;
  }
}

void require_invertible(const Deg3Element& a, const char* what) {
  if (!is_invertible(a)) throw Error(Errc::NotInvertible, std::string(what) + " is not invertible");
}

InvolutionPtr sigma_u(const SecondTits& j) {
  if (j.u() == d3_one(j.algebra())) return j.sigma();
  return Involution::utwist(j.sigma(), j.u());
}

Matrix first_matrix(const FirstTits& j, const std::function<std::array<Deg3Element, 3>(const Deg3Element&, const Deg3Element&,
                                                                                      const Deg3Element&)>& f) {
  return matrix_of(j, [&](const Vec& v) {
    const auto [x, y, z] = j.unpack(v);
    const auto [x2, y2, z2] = f(x, y, z);
    return j.pack(x2, y2, z2);
  });
}

Matrix second_matrix(const SecondTits& j,
                     const std::function<std::pair<Deg3Element, Deg3Element>(const Deg3Element&, const Deg3Element&)>& f) {
  return matrix_of(j, [&](const Vec& v) {
    const auto [b, x] = j.unpack(v);
    const auto [b2, x2] = f(b, x);
    return j.pack(b2, x2);
  });
}

SimilarityMap require_automorphism(SimilarityMap m) {
  if (!m.automorphism)
    throw Error(Errc::InvalidAutomorphism, m.name + " is a similarity with multiplier " + m.multiplier.to_string() +
                                               " but not an automorphism");
  return m;
}

}  // namespace

// ---------------------------------------------------------------- certification

Certification try_certify(const JordanPtr& j, const Matrix& m, std::string name) {
  const std::size_t n = j->dim();
  if (m.rows() != n || m.cols() != n)
    throw Error(Errc::DimensionMismatch, "expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
  Certification out;
  if (det(m).is_zero()) {
    out.failure = Errc::SingularMatrix;
    out.detail = "matrix is singular";
    return out;
  }
  const GenericPoint g = generic_point(j->base_ring(), n);
  const Scalar image = j->norm(m.apply(g.x));
  const Scalar norm = j->norm(g.x);
  if (norm.is_zero()) {
    out.detail = "norm form is identically zero";
    return out;
  }
  // nu is read off at the leading monomial of N(X), then checked everywhere.
  const PolyTerm& lead = norm.terms().front();
  Scalar c = Scalar::zero(lead.coef.ring());
  for (const auto& t : image.terms())
    if (t.mono == lead.mono) c = t.coef;
  const Scalar nu = c / lead.coef;
  if (nu.is_zero() || !(image == nu * norm)) {
    out.detail = "N(f(X)) is not a scalar multiple of N(X)";
    return out;
  }
  out.similarity = true;
  const bool fixes_unit = vec_equal(m.apply(j->unit()), j->unit());
  out.map = SimilarityMap{j, m, nu, nu.is_one() && fixes_unit, std::move(name)};
  return out;
}

SimilarityMap certify(const JordanPtr& j, const Matrix& m, std::string name) {
  Certification c = try_certify(j, m, name);
  if (!c.similarity) throw Error(c.failure, (name.empty() ? std::string("map") : name) + ": " + c.detail);
  return std::move(*c.map);
}

Matrix matrix_of(const CubicJordan& j, const std::function<Vec(const Vec&)>& f) {
  std::vector<Vec> cols;
  cols.reserve(j.dim());
  for (std::size_t i = 0; i < j.dim(); ++i) cols.push_back(f(unit_vector(j.base_ring(), j.dim(), i)));
  return Matrix::from_columns(cols);
}

SimilarityMap identity_map(const JordanPtr& j) {
  return certify(j, Matrix::identity(j->base_ring(), j->dim()), "identity");
}

SimilarityMap homothety(const JordanPtr& j, const Scalar& alpha) {
  return certify(j, embed(alpha, j->base_ring()) * Matrix::identity(j->base_ring(), j->dim()),
                 "homothety(" + alpha.to_string() + ")");
}

SimilarityMap u_similarity(const JordanPtr& j, const Vec& a) {
  if (!unit_scalar(j->norm(a))) throw Error(Errc::NotInvertible, "N(a) = " + j->norm(a).to_string());
  return certify(j, u_matrix(*j, a), "U(" + vec_to_string(a) + ")");
}

// ---------------------------------------------------------------- first construction

SimilarityMap aut_conj_I(const FirstTitsPtr& j, const Deg3Element& d) {
  require_invertible(d, "d");
  const Deg3Element di = inverse(d);
  const Matrix m = first_matrix(*j, [&](const Deg3Element& x, const Deg3Element& y, const Deg3Element& z) {
    return std::array<Deg3Element, 3>{d * x * di, d * y * di, d * z * di};
  });
  return certify(j, m, "aut_conj_I");
}

std::string_view jvariant_name(JVariant v) { return v == JVariant::A ? "A" : "B"; }

Matrix jmap_matrix(const FirstTits& j, const Deg3Element& c, JVariant variant) {
  if (!reduced_norm(c).is_one()) throw Error(Errc::NotNormOne, "N_D(c) = " + reduced_norm(c).to_string());
  const Deg3Element ci = inverse(c);
  return first_matrix(j, [&](const Deg3Element& x, const Deg3Element& y, const Deg3Element& z) {
    if (variant == JVariant::A) return std::array<Deg3Element, 3>{x, y * c, ci * z * c};
    return std::array<Deg3Element, 3>{x, y * c, ci * z};
  });
}

SimilarityMap aut_J(const FirstTitsPtr& j, const Deg3Element& c, JVariant variant) {
  const std::string name = "aut_J_" + std::string(jvariant_name(variant));
  return require_automorphism(certify(j, jmap_matrix(*j, c, variant), name));
}

JVariantVerdict compare_jmap_variants(const FirstTitsPtr& j, const Deg3Element& c) {
  JVariantVerdict v;
  v.a = try_certify(j, jmap_matrix(*j, c, JVariant::A), "aut_J_A");
  v.b = try_certify(j, jmap_matrix(*j, c, JVariant::B), "aut_J_B");
  v.a_automorphism = v.a.similarity && v.a.map->automorphism;
  v.b_automorphism = v.b.similarity && v.b.map->automorphism;
  return v;
}

SimilarityMap aut_ext_D(const FirstTitsPtr& j, const Deg3Element& g, const Deg3Element& h) {
  require_invertible(g, "g");
  require_invertible(h, "h");
  const Scalar ng = reduced_norm(g), nh = reduced_norm(h);
  if (!(ng == nh)) throw Error(Errc::NormMismatch, "N_D(g) = " + ng.to_string() + " != N_D(h) = " + nh.to_string());
  const Deg3Element gi = inverse(g), hi = inverse(h);
  const Matrix m = first_matrix(*j, [&](const Deg3Element& x, const Deg3Element& y, const Deg3Element& z) {
    return std::array<Deg3Element, 3>{g * x * gi, g * y * hi, h * z * gi};
  });
  return require_automorphism(certify(j, m, "aut_ext_D"));
}

SimilarityMap str_ext_D(const FirstTitsPtr& j, const Scalar& gamma, const Deg3Element& a, const Deg3Element& b,
                        const Deg3Element& c) {
  if (gamma.is_zero()) throw Error(Errc::NormConstraintViolated, "gamma must be nonzero");
  require_invertible(a, "a");
  require_invertible(b, "b");
  require_invertible(c, "c");
  const Scalar na = reduced_norm(a), nbc = reduced_norm(b) * reduced_norm(c);
  if (!(na == nbc))
    throw Error(Errc::NormConstraintViolated, "N_D(a) = " + na.to_string() + " != N_D(b) N_D(c) = " + nbc.to_string());
  const Deg3Element as = sharp(a), bs = sharp(b), ci = inverse(c);
  const Matrix m = first_matrix(*j, [&](const Deg3Element& x, const Deg3Element& y, const Deg3Element& z) {
    return std::array<Deg3Element, 3>{gamma * (a * x * b), gamma * (bs * y * c), gamma * (ci * z * as)};
  });
  return certify(j, m, "str_ext_D");
}

StabFactorization factor_aut_stab_D(const FirstTitsPtr& j, const SimilarityMap& phi, const Deg3Element& a,
                                    const Deg3Element& b) {
  require_invertible(b, "b");
  StabFactorization f{aut_conj_I(j, a), aut_J(j, a * inverse(b), JVariant::B)};
  if (!(f.j_part.matrix * f.i_part.matrix == phi.matrix))
    throw Error(Errc::FactorizationMismatch, "J_{ab^-1} I_a differs from the given map");
  return f;
}

// ---------------------------------------------------------------- second construction

SimilarityMap aut_ext_second(const SecondTitsPtr& j, const Deg3Element& g, const Deg3Element& q) {
  const MembershipResult sim = membership(g, Group::Sim, j->sigma());
  if (!sim.member) throw Error(Errc::NotASimilitude, "g sigma(g) is not a nonzero scalar of the fixed field");
  if (!membership(q, Group::U, sigma_u(*j)).member)
    throw Error(Errc::MembershipFailure, "q is not unitary for sigma_u");
  const Scalar nu = reduced_norm(g);
  const Scalar want = nu / center_conj(nu);
  if (!(reduced_norm(q) == want))
    throw Error(Errc::BadQNorm, "N_B(q) = " + reduced_norm(q).to_string() + " != conj(nu)^-1 nu = " + want.to_string());
  const Scalar lambda_inv = sim.witness->inverse();
  const Deg3Element gi = inverse(g), sgs = sharp(j->sigma()->apply(g));
  const Matrix m = second_matrix(*j, [&](const Deg3Element& b, const Deg3Element& x) {
    return std::make_pair(g * b * gi, lambda_inv * (sgs * x * q));
  });
  return require_automorphism(certify(j, m, "aut_ext_second"));
}

SimilarityMap aut_stab_second(const SecondTitsPtr& j, const Deg3Element& p, const Deg3Element& q) {
  if (!membership(p, Group::U, j->sigma()).member) throw Error(Errc::MembershipFailure, "p is not in U(B, sigma)");
  if (!membership(q, Group::U, sigma_u(*j)).member) throw Error(Errc::MembershipFailure, "q is not in U(B, sigma_u)");
  const Scalar prod = reduced_norm(p) * reduced_norm(q);
  if (!prod.is_one()) throw Error(Errc::NormProductFailure, "N_B(p) N_B(q) = " + prod.to_string());
  const Deg3Element pi = inverse(p);
  const Matrix m = second_matrix(*j, [&](const Deg3Element& b, const Deg3Element& x) {
    return std::make_pair(p * b * pi, p * x * q);
  });
  return require_automorphism(certify(j, m, "aut_stab_second"));
}

SimilarityMap str_ext_second(const SecondTitsPtr& j, const Scalar& gamma, const Deg3Element& g,
                             const Deg3Element& q) {
  if (gamma.is_zero()) throw Error(Errc::NormConstraintViolated, "gamma must be nonzero");
  require_invertible(g, "g");
  if (!membership(q, Group::U, sigma_u(*j)).member) throw Error(Errc::MembershipFailure, "q is not in U(B, sigma_u)");
  const Deg3Element sg = j->sigma()->apply(g);
  const Scalar want = reduced_norm(inverse(sg) * g);
  if (!(reduced_norm(q) == want))
    throw Error(Errc::BadQNorm, "N_B(q) = " + reduced_norm(q).to_string() + " != N_B(sigma(g)^-1 g) = " + want.to_string());
  const Deg3Element sgs = sharp(sg);
  const Matrix m = second_matrix(*j, [&](const Deg3Element& b, const Deg3Element& x) {
    return std::make_pair(gamma * (g * b * sg), gamma * (sgs * x * q));
  });
  return certify(j, m, "str_ext_second");
}

// ---------------------------------------------------------------- group operations

SimilarityMap compose(const SimilarityMap& f, const SimilarityMap& g) {
  if (f.parent != g.parent) throw Error(Errc::IncompatibleParents, "maps on different structures");
  SimilarityMap out{f.parent, f.matrix * g.matrix, f.multiplier * g.multiplier, false, f.name + " o " + g.name};
  out.automorphism = out.multiplier.is_one() && vec_equal(out.apply(f.parent->unit()), f.parent->unit());
  return out;
}

SimilarityMap invert(const SimilarityMap& f) {
  return {f.parent, inverse(f.matrix), f.multiplier.inverse(), f.automorphism, "inv(" + f.name + ")"};
}

// ---------------------------------------------------------------- sampling

Deg3Element random_norm_one(Rng& rng, const AlgebraPtr& matrix3, std::size_t factors) {
  std::vector<Transvection> ts;
  for (std::size_t f = 0; f < factors; ++f) {
    const std::size_t i = rng.below(3);
    const std::size_t j = (i + 1 + rng.below(2)) % 3;
    ts.push_back({i, j, rng.nonzero_scalar(matrix3->base())});
  }
  return transvection_product(matrix3, ts);
}

Deg3Element random_invertible(Rng& rng, const AlgebraPtr& alg) {
  for (;;) {
    Deg3Element a = make_element(alg, rng.vector(alg->base(), alg->dim()));
    if (is_invertible(a)) return a;
  }
}

std::pair<Deg3Element, Deg3Element> random_equal_norm_pair(Rng& rng, const AlgebraPtr& matrix3) {
  Deg3Element g = random_invertible(rng, matrix3);
  Deg3Element h = g * random_norm_one(rng, matrix3);
  return {std::move(g), std::move(h)};
}

}  // namespace albert
