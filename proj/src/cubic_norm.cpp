#include <albert/cubic_norm.hpp>

#include <future>
#include <sstream>

namespace albert {

namespace {

RingPtr ring_of(const Vec& v, RingPtr r) {
  for (const auto& x : v)
    if (x.ring() != r && !same_ring(x.ring(), r)) r = join(r, x.ring());
  return r;
}

// Coefficient of the squarefree monomial prod(vars) in p.
Scalar coeff(const Scalar& p, std::initializer_list<std::size_t> vars, const RingPtr& base) {
  if (p.ring()->kind() != RingKind::Polynomial) return vars.size() == 0 ? p : Scalar::zero(base);
  Monomial m;
  for (auto v : vars) m = m * Monomial::variable(v);
  for (const auto& t : p.terms())
    if (t.mono == m) return t.coef;
  return Scalar::zero(p.ring()->base());
}

// c + e_1 x_1 + ... over the square-zero ring with len(dirs) infinitesimals.
Scalar nil_norm(const CubicJordan& j, const Vec& base_point, const std::vector<const Vec*>& dirs, RingPtr& nil) {
  RingPtr r = ring_of(base_point, j.base_ring());
  for (const Vec* d : dirs) r = ring_of(*d, r);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < dirs.size(); ++i) names.push_back("e" + std::to_string(i + 1));
  nil = Ring::polynomial(r, names, true);
  Vec v(j.dim());
  for (std::size_t i = 0; i < j.dim(); ++i) {
    Scalar s = embed(base_point[i], nil);
    for (std::size_t d = 0; d < dirs.size(); ++d)
      if (!(*dirs[d])[i].is_zero()) s = s + (*dirs[d])[i] * Scalar::variable(nil, d);
    v[i] = std::move(s);
  }
  return j.norm(v);
}

std::string sample_text(const Vec& v) { return vec_to_string(v); }

// Generic (polynomial) vectors differ by a nonzero polynomial; print the
// first mismatching coordinate index.
std::string first_mismatch(const Vec& a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i] == b[i])) return "coordinate " + std::to_string(i);
  return "";
}

}  // namespace

// ---------------------------------------------------------------- structures

DPlus::DPlus(AlgebraPtr d) : d_(std::move(d)) {
  if (d_->kind() == AlgebraKind::ProdOp)
    throw Error(Errc::Unsupported, "D_+ needs a norm with values in the base ring");
}

RestrictedJordan::RestrictedJordan(JordanPtr parent, std::vector<Vec> basis)
    : parent_(std::move(parent)), basis_(std::move(basis)) {
  if (basis_.empty()) throw Error(Errc::DimensionMismatch, "empty subspace");
  try {
    left_inverse_ = left_inverse(Matrix::from_columns(basis_));
  } catch (const Error&) {
    throw Error(Errc::DimensionMismatch, "subspace basis is not independent");
  }
  unit_ = restrict(parent_->unit());
}

std::string RestrictedJordan::describe() const {
  return "restrict(" + parent_->describe() + ", dim=" + std::to_string(basis_.size()) + ")";
}

Vec RestrictedJordan::expand(const Vec& x) const {
  if (x.size() != basis_.size()) throw Error(Errc::DimensionMismatch, "restricted coordinate count");
  const RingPtr r = ring_of(x, parent_->base_ring());
  Vec out = zero_vector(r, parent_->dim());
  for (std::size_t i = 0; i < basis_.size(); ++i)
    if (!x[i].is_zero()) out = vec_add(out, vec_scale(x[i], basis_[i]));
  return out;
}

Vec RestrictedJordan::restrict(const Vec& v) const {
  Vec c = left_inverse_.apply(v);
  if (!vec_equal(expand(c), v)) throw Error(Errc::DimensionMismatch, "vector leaves the subspace");
  return c;
}

// ---------------------------------------------------------------- derived

Scalar trace_linear(const CubicJordan& j, const Vec& x) {
  RingPtr nil;
  const Scalar n = nil_norm(j, j.unit(), {&x}, nil);
  return coeff(n, {0}, nil->base());
}

Scalar trace_bilinear(const CubicJordan& j, const Vec& x, const Vec& y) {
  RingPtr nil;
  const Scalar n = nil_norm(j, j.unit(), {&x, &y}, nil);
  const RingPtr& r = nil->base();
  return coeff(n, {0}, r) * coeff(n, {1}, r) - coeff(n, {0, 1}, r);
}

Scalar directional(const CubicJordan& j, const Vec& x, const Vec& y) {
  RingPtr nil;
  const Scalar n = nil_norm(j, x, {&y}, nil);
  return coeff(n, {0}, nil->base());
}

Vec cross(const CubicJordan& j, const Vec& x, const Vec& y) {
  return vec_sub(vec_sub(j.sharp(vec_add(x, y)), j.sharp(x)), j.sharp(y));
}

Vec u_op(const CubicJordan& j, const Vec& x, const Vec& y) {
  return vec_sub(vec_scale(trace_bilinear(j, x, y), x), cross(j, j.sharp(x), y));
}

Matrix u_matrix(const CubicJordan& j, const Vec& x) {
  const RingPtr r = ring_of(x, j.base_ring());
  const Vec xs = j.sharp(x);
  const Vec xss = j.sharp(xs);
  std::vector<Vec> cols;
  cols.reserve(j.dim());
  for (std::size_t i = 0; i < j.dim(); ++i) {
    const Vec e = unit_vector(r, j.dim(), i);
    // x^# cross e = (x^# + e)^# - x^## - e^#
    const Vec xc = vec_sub(vec_sub(j.sharp(vec_add(xs, e)), xss), j.sharp(e));
    cols.push_back(vec_sub(vec_scale(trace_bilinear(j, x, e), x), xc));
  }
  return Matrix::from_columns(cols);
}

Vec jordan_inverse(const CubicJordan& j, const Vec& x) {
  const Scalar n = j.norm(x);
  if (n.is_zero()) throw Error(Errc::NotInvertible, "N(x) = 0");
  Scalar inv;
  try {
    inv = n.inverse();
  } catch (const Error&) {
    throw Error(Errc::NotInvertible, "N(x) = " + n.to_string() + " is not a unit");
  }
  return vec_scale(inv, j.sharp(x));
}

Matrix gram(const CubicJordan& j, const std::vector<Vec>& basis) {
  const std::size_t n = basis.size();
  Matrix g = Matrix::zero(j.base_ring(), n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      g(a, b) = trace_bilinear(j, basis[a], basis[b]);
      g(b, a) = g(a, b);
    }
  return g;
}

Matrix gram(const CubicJordan& j) {
  std::vector<Vec> basis;
  for (std::size_t i = 0; i < j.dim(); ++i) basis.push_back(unit_vector(j.base_ring(), j.dim(), i));
  return gram(j, basis);
}

bool nondegenerate(const CubicJordan& j) { return !det(gram(j)).is_zero(); }

GenericPoint generic_point(const RingPtr& k, std::size_t n, bool with_y) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("X" + std::to_string(i));
  if (with_y)
    for (std::size_t i = 0; i < n; ++i) names.push_back("Y" + std::to_string(i));
  GenericPoint g;
  g.ring = Ring::polynomial(k, names);
  for (std::size_t i = 0; i < n; ++i) g.x.push_back(Scalar::variable(g.ring, i));
  if (with_y)
    for (std::size_t i = 0; i < n; ++i) g.y.push_back(Scalar::variable(g.ring, n + i));
  return g;
}

// ---------------------------------------------------------------- checks

bool AxiomReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

const CheckResult* AxiomReport::find(const std::string& id) const {
  for (const auto& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

std::string AxiomReport::to_text() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << c.id << ' ' << (c.pass ? "PASS" : "FAIL") << ' ' << c.mode << " n=" << c.instances << " [" << c.label << "]";
    if (!c.detail.empty()) os << ' ' << c.detail;
    os << '\n';
  }
  return os.str();
}

namespace {

struct Samples {
  std::vector<Vec> xs;
  std::vector<std::pair<Vec, Vec>> pairs;
};

Samples draw_samples(const CubicJordan& j, const SuiteOptions& opt) {
  Rng rng(opt.seed, opt.bounds);
  Samples s;
  const std::size_t n = std::max<std::size_t>(opt.samples, 1);
  s.xs.push_back(j.unit());
  for (std::size_t i = 1; i < n; ++i) s.xs.push_back(rng.vector(j.base_ring(), j.dim()));
  s.pairs.emplace_back(j.unit(), rng.vector(j.base_ring(), j.dim()));
  for (std::size_t i = 1; i < n; ++i) {
    Vec x = rng.vector(j.base_ring(), j.dim());
    s.pairs.emplace_back(std::move(x), rng.vector(j.base_ring(), j.dim()));
  }
  return s;
}

CheckResult check_axiom2(const CubicJordan& j) {
  CheckResult r{"axiom-2", "N(c) = 1", true, "direct", 1, ""};
  const Scalar n = j.norm(j.unit());
  if (!n.is_one()) {
    r.pass = false;
    r.detail = "N(c) = " + n.to_string();
  }
  return r;
}

CheckResult check_axiom6(const CubicJordan& j) {
  CheckResult r{"axiom-6", "c# = c", true, "direct", 1, ""};
  const Vec cs = j.sharp(j.unit());
  if (!vec_equal(cs, j.unit())) {
    r.pass = false;
    r.detail = "c# = " + vec_to_string(cs);
  }
  return r;
}

CheckResult check_axiom3(const CubicJordan& j) {
  CheckResult r{"axiom-3", "T(x,y) nondegenerate", true, "direct", 1, ""};
  const Scalar d = det(gram(j));
  r.pass = !d.is_zero();
  r.detail = r.pass ? "det Gram != 0" : "det Gram = 0";
  return r;
}

template <class Pred>
CheckResult run_identity(std::string id, std::string label, const std::vector<Vec>& samples, bool symbolic,
                         const Pred& holds, const std::function<std::pair<bool, std::string>()>& generic) {
  CheckResult r{std::move(id), std::move(label), true, "sampled", 0, ""};
  for (const auto& x : samples) {
    ++r.instances;
    if (!holds(x)) {
      r.pass = false;
      r.detail = "counterexample x = " + sample_text(x);
      return r;
    }
  }
  if (symbolic) {
    auto [ok, where] = generic();
    r.mode = "sampled+symbolic";
    if (!ok) {
      r.pass = false;
      r.detail = "generic identity fails at " + where;
    }
  }
  return r;
}

CheckResult check_axiom5(const CubicJordan& j, const Samples& s, bool symbolic) {
  auto holds = [&](const Vec& x) { return vec_equal(j.sharp(j.sharp(x)), vec_scale(j.norm(x), x)); };
  auto generic = [&]() -> std::pair<bool, std::string> {
    const GenericPoint g = generic_point(j.base_ring(), j.dim());
    const Vec lhs = j.sharp(j.sharp(g.x));
    const Vec rhs = vec_scale(j.norm(g.x), g.x);
    return {vec_equal(lhs, rhs), first_mismatch(lhs, rhs)};
  };
  return run_identity("axiom-5", "x## = N(x) x", s.xs, symbolic, holds, generic);
}

CheckResult check_axiom7(const CubicJordan& j, const Samples& s, bool symbolic) {
  const Vec c = j.unit();
  auto identity = [&](const Vec& x) {
    return std::make_pair(cross(j, c, x), vec_sub(vec_scale(trace_linear(j, x), c), x));
  };
  auto holds = [&](const Vec& x) {
    auto [l, r] = identity(x);
    return vec_equal(l, r);
  };
  auto generic = [&]() -> std::pair<bool, std::string> {
    const GenericPoint g = generic_point(j.base_ring(), j.dim());
    auto [l, r] = identity(g.x);
    return {vec_equal(l, r), first_mismatch(l, r)};
  };
  return run_identity("axiom-7", "c x x = T(x) c - x", s.xs, symbolic, holds, generic);
}

CheckResult check_axiom4(const CubicJordan& j, const Samples& s, bool symbolic) {
  CheckResult r{"axiom-4", "T(x#, y) = D_x^y N", true, "sampled", 0, ""};
  for (const auto& [x, y] : s.pairs) {
    ++r.instances;
    if (!(trace_bilinear(j, j.sharp(x), y) == directional(j, x, y))) {
      r.pass = false;
      r.detail = "counterexample x = " + sample_text(x) + ", y = " + sample_text(y);
      return r;
    }
  }
  if (symbolic) {
    r.mode = "sampled+symbolic";
    const GenericPoint g = generic_point(j.base_ring(), j.dim(), true);
    if (!(trace_bilinear(j, j.sharp(g.x), g.y) == directional(j, g.x, g.y))) {
      r.pass = false;
      r.detail = "generic identity fails";
    }
  }
  return r;
}

}  // namespace

AxiomReport axiom_suite(const CubicJordan& j, const SuiteOptions& opt) {
  const Samples s = draw_samples(j, opt);
  std::vector<std::function<CheckResult()>> tasks{
      [&] { return check_axiom2(j); },
      [&] { return check_axiom3(j); },
      [&] { return check_axiom4(j, s, opt.symbolic); },
      [&] { return check_axiom5(j, s, opt.symbolic); },
      [&] { return check_axiom6(j); },
      [&] { return check_axiom7(j, s, opt.symbolic); },
  };
  AxiomReport report;
  if (opt.parallel) {
    std::vector<std::future<CheckResult>> fs;
    for (auto& t : tasks) fs.push_back(std::async(std::launch::async, t));
    for (auto& f : fs) report.checks.push_back(f.get());
  } else {
    for (auto& t : tasks) report.checks.push_back(t());
  }
  return report;
}

CheckResult fundamental_formula(const CubicJordan& j, std::size_t pairs, std::uint64_t seed,
                                const SampleBounds& bounds) {
  CheckResult r{"fundamental-formula", "U_{U_x y} = U_x U_y U_x", true, "sampled", 0, ""};
  Rng rng(seed, bounds);
  for (std::size_t i = 0; i < pairs; ++i) {
    const Vec x = rng.vector(j.base_ring(), j.dim());
    const Vec y = rng.vector(j.base_ring(), j.dim());
    const Matrix ux = u_matrix(j, x);
    const Matrix lhs = u_matrix(j, ux.apply(y));
    const Matrix rhs = ux * u_matrix(j, y) * ux;
    ++r.instances;
    if (!(lhs == rhs)) {
      r.pass = false;
      r.detail = "counterexample x = " + sample_text(x) + ", y = " + sample_text(y);
      return r;
    }
  }
  return r;
}

CheckResult degree_identity_u(const CubicJordan& j) {
  CheckResult r{"degree-u", "N(U_a x) = N(a)^2 N(x)", true, "symbolic", 1, ""};
  const GenericPoint g = generic_point(j.base_ring(), j.dim(), true);
  const Scalar na = j.norm(g.x);
  const Scalar lhs = j.norm(u_op(j, g.x, g.y));
  const Scalar rhs = na * na * j.norm(g.y);
  r.pass = lhs == rhs;
  if (!r.pass) r.detail = "normal forms differ";
  return r;
}

CheckResult degree_identity_sharp(const CubicJordan& j) {
  CheckResult r{"degree-sharp", "N(x#) = N(x)^2", true, "symbolic", 1, ""};
  const GenericPoint g = generic_point(j.base_ring(), j.dim());
  const Scalar n = j.norm(g.x);
  r.pass = j.norm(j.sharp(g.x)) == n * n;
  if (!r.pass) r.detail = "normal forms differ";
  return r;
}

CheckResult trace_form_oracle(const AlgebraPtr& d, std::size_t pairs, std::uint64_t seed, const SampleBounds& bounds) {
  CheckResult r{"trace-oracle", "T(x,y) = T_D(xy) on D_+", true, "sampled", 0, ""};
  const DPlus j(d);
  Rng rng(seed, bounds);
  for (std::size_t i = 0; i < pairs; ++i) {
    const Vec x = rng.vector(d->base(), d->dim());
    const Vec y = rng.vector(d->base(), d->dim());
    ++r.instances;
    const Scalar derived = trace_bilinear(j, x, y);
    const Scalar oracle = reduced_trace(make_element(d, x) * make_element(d, y));
    if (!(derived == oracle)) {
      r.pass = false;
      r.detail = "x = " + sample_text(x) + ", y = " + sample_text(y) + ": " + derived.to_string() +
                 " != " + oracle.to_string();
      return r;
    }
  }
  return r;
}

// ---------------------------------------------------------------- subspaces

namespace {

std::size_t span_rank(const std::vector<Vec>& vs) {
  if (vs.empty()) return 0;
  return rank(Matrix::from_rows(vs));
}

}  // namespace

bool in_span(const std::vector<Vec>& basis, const std::vector<Vec>& vs) {
  std::vector<Vec> all = basis;
  const std::size_t r0 = span_rank(all);
  all.insert(all.end(), vs.begin(), vs.end());
  return span_rank(all) == r0;
}

std::vector<Vec> subalgebra_closure(const CubicJordan& j, const std::vector<Vec>& generators) {
  std::vector<Vec> basis;
  auto add = [&](const Vec& v) {
    if (vec_is_zero(v)) return false;
    std::vector<Vec> trial = basis;
    trial.push_back(v);
    if (span_rank(trial) == basis.size()) return false;
    basis.push_back(v);
    return true;
  };
  add(j.unit());
  for (const auto& g : generators) add(g);
  // Each pass closes the current span under b_i^# and b_i x b_j.
  for (std::size_t done = 0; done < basis.size() && basis.size() < j.dim();) {
    const std::size_t end = basis.size();
    std::vector<Vec> sharps;
    for (std::size_t i = 0; i < end; ++i) sharps.push_back(j.sharp(basis[i]));
    for (std::size_t i = done; i < end; ++i) {
      add(sharps[i]);
      for (std::size_t k = 0; k < end; ++k) {
        if (k < done && i < done) continue;
        add(vec_sub(vec_sub(j.sharp(vec_add(basis[i], basis[k])), sharps[i]), sharps[k]));
      }
    }
    done = end;
  }
  return basis;
}

FixedSpace fixed_subspace(const CubicJordan& j, const Matrix& f) {
  FixedSpace out;
  out.basis = kernel(f - Matrix::identity(j.base_ring(), j.dim()));
  out.sharp_closed = true;
  for (std::size_t i = 0; i < out.basis.size() && out.sharp_closed; ++i) {
    const Vec si = j.sharp(out.basis[i]);
    if (!in_span(out.basis, {si})) out.sharp_closed = false;
    for (std::size_t k = i + 1; k < out.basis.size() && out.sharp_closed; ++k)
      if (!in_span(out.basis, {cross(j, out.basis[i], out.basis[k])})) out.sharp_closed = false;
  }
  return out;
}

}  // namespace albert
