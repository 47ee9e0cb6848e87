#include <albert/tits.hpp>

namespace albert {

namespace {

Vec slice(const Vec& v, std::size_t from, std::size_t n) {
  return Vec(v.begin() + static_cast<long>(from), v.begin() + static_cast<long>(from + n));
}

Vec concat(std::initializer_list<const Vec*> parts) {
  Vec out;
  for (const Vec* p : parts) out.insert(out.end(), p->begin(), p->end());
  RingPtr r = out.front().ring();
  for (const auto& x : out)
    if (x.ring() != r && !same_ring(x.ring(), r)) r = join(r, x.ring());
  for (auto& x : out)
    if (x.ring() != r) x = embed(x, r);
  return out;
}

RingPtr center_of(const AlgebraPtr& b) {
  RingPtr k = b->norm_ring();
  if (k->kind() != RingKind::Extension || k->degree() != 2)
    throw Error(Errc::InvalidInvolution, b->to_string() + " has no quadratic etale center");
  return k;
}

}  // namespace

// ---------------------------------------------------------------- first

FirstTits::FirstTits(AlgebraPtr d, Scalar lambda, std::optional<bool> division)
    : d_(std::move(d)), division_(division) {
  if (d_->kind() == AlgebraKind::ProdOp)
    throw Error(Errc::Unsupported, "first construction needs a norm with values in the base ring");
  lambda_ = embed(lambda, d_->base());
  if (lambda_.is_zero()) throw Error(Errc::ZeroLambda, "lambda must be nonzero");
  try {
    lambda_inv_ = lambda_.inverse();
  } catch (const Error&) {
    throw Error(Errc::ZeroLambda, "lambda = " + lambda_.to_string() + " is not a unit");
  }
}

Vec FirstTits::unit() const {
  const Deg3Element zero = d3_zero(d_, d_->base());
  return pack(d3_one(d_), zero, zero);
}

Scalar FirstTits::norm(const Vec& v) const {
  const auto [x, y, z] = unpack(v);
  return reduced_norm(x) + lambda_ * reduced_norm(y) + lambda_inv_ * reduced_norm(z) - reduced_trace(x * y * z);
}

Vec FirstTits::sharp(const Vec& v) const {
  const auto [x, y, z] = unpack(v);
  return pack(albert::sharp(x) - y * z, lambda_inv_ * albert::sharp(z) - x * y, lambda_ * albert::sharp(y) - z * x);
}

std::string FirstTits::describe() const {
  return "first_tits(" + d_->to_string() + ", lambda=" + lambda_.to_string() + ")";
}

Vec FirstTits::pack(const Deg3Element& x, const Deg3Element& y, const Deg3Element& z) const {
  if (x.alg != d_ || y.alg != d_ || z.alg != d_) throw Error(Errc::IncompatibleParents, "components from another algebra");
  return concat({&x.c, &y.c, &z.c});
}

std::array<Deg3Element, 3> FirstTits::unpack(const Vec& v) const {
  const std::size_t n = d_->dim();
  if (v.size() != 3 * n) throw Error(Errc::DimensionMismatch, "first construction expects " + std::to_string(3 * n) + " coordinates");
  return {make_element(d_, slice(v, 0, n)), make_element(d_, slice(v, n, n)), make_element(d_, slice(v, 2 * n, n))};
}

// ---------------------------------------------------------------- second

void check_admissible(const InvolutionPtr& sigma, const Deg3Element& u, const Scalar& mu) {
  const AlgebraPtr& b = sigma->algebra();
  if (u.alg != b) throw Error(Errc::InadmissiblePair, "u is not an element of " + b->to_string());
  const RingPtr k = center_of(b);
  if (!embeds(*mu.ring(), *k)) throw Error(Errc::InadmissiblePair, "mu must lie in the center " + k->to_string());
  if (!(sigma->apply(u) == u)) throw Error(Errc::InadmissiblePair, "sigma(u) != u");
  const Scalar nu = reduced_norm(u);
  const Scalar m = embed(mu, k);
  const Scalar mm = m * center_conj(m);
  if (!(embed(nu, k) == mm))
    throw Error(Errc::InadmissiblePair, "N_B(u) = " + nu.to_string() + " != mu conj(mu) = " + mm.to_string());
  if (!is_invertible(u)) throw Error(Errc::InadmissiblePair, "u is not invertible");
}

SecondTits::SecondTits(InvolutionPtr sigma, Deg3Element u, Scalar mu) : sigma_(std::move(sigma)), u_(std::move(u)) {
  check_admissible(sigma_, u_, mu);
  const AlgebraPtr& b = sigma_->algebra();
  center_ = center_of(b);
  k_ = center_->base();
  mu_ = embed(mu, center_);
  mu_bar_ = center_conj(mu_);
  u_inv_ = inverse(u_);
  flat_ = flat_dim(b, k_);

  // sigma is k-linear; its fixed space on flattened coordinates.
  std::vector<Vec> cols;
  for (std::size_t i = 0; i < flat_; ++i)
    cols.push_back(flatten(sigma_->apply(unflatten(b, k_, unit_vector(k_, flat_, i))), k_));
  herm_ = kernel(Matrix::from_columns(cols) - Matrix::identity(k_, flat_));
  herm_left_inverse_ = left_inverse(Matrix::from_columns(herm_));
}

Vec SecondTits::unit() const { return pack(d3_one(algebra()), d3_zero(algebra(), k_)); }

Scalar SecondTits::to_base(const Scalar& kappa, const char* what) const {
  const auto s = center_to_base(kappa);
  if (!s) throw Error(Errc::Unsupported, std::string(what) + " left the fixed field");
  return *s;
}

Scalar SecondTits::norm(const Vec& v) const {
  const auto [b, x] = unpack(v);
  const Scalar nb = reduced_norm(b);
  const Scalar tk = center_trace(mu_ * reduced_norm(x));
  const Scalar tb = reduced_trace(b * x * u_ * sigma_->apply(x));
  return to_base(nb - tb, "N_B(b) - T_B(b x u sigma(x))") + tk;
}

Vec SecondTits::sharp(const Vec& v) const {
  const auto [b, x] = unpack(v);
  const Deg3Element sx = sigma_->apply(x);
  return pack(albert::sharp(b) - x * u_ * sx, mu_bar_ * albert::sharp(sx) * u_inv_ - b * x);
}

std::string SecondTits::describe() const {
  return "second_tits(" + algebra()->to_string() + ", " + sigma_->to_string() + ", u=" + vec_to_string(u_.c) +
         ", mu=" + mu_.to_string() + ")";
}

Vec SecondTits::hermitian_coords(const Deg3Element& b) const {
  const Vec flat = flatten(b, k_);
  Vec h = herm_left_inverse_.apply(flat);
  RingPtr r = k_;
  for (const auto& s : h) r = join(r, s.ring());
  Vec back = zero_vector(r, flat_);
  for (std::size_t i = 0; i < herm_.size(); ++i) back = vec_add(back, vec_scale(h[i], herm_[i]));
  if (!vec_equal(back, flat)) throw Error(Errc::DimensionMismatch, "element is not sigma-hermitian");
  return h;
}

Vec SecondTits::pack(const Deg3Element& b, const Deg3Element& x) const {
  if (b.alg != algebra() || x.alg != algebra()) throw Error(Errc::IncompatibleParents, "components from another algebra");
  const Vec h = hermitian_coords(b);
  const Vec f = flatten(x, k_);
  return concat({&h, &f});
}

std::pair<Deg3Element, Deg3Element> SecondTits::unpack(const Vec& v) const {
  const std::size_t m = herm_.size();
  if (v.size() != m + flat_)
    throw Error(Errc::DimensionMismatch, "second construction expects " + std::to_string(m + flat_) + " coordinates");
  RingPtr r = k_;
  for (const auto& s : v)
    if (s.ring() != r && !same_ring(s.ring(), r)) r = join(r, s.ring());
  Vec flat = zero_vector(r, flat_);
  for (std::size_t i = 0; i < m; ++i)
    if (!v[i].is_zero()) flat = vec_add(flat, vec_scale(v[i], herm_[i]));
  return {unflatten(algebra(), k_, flat), unflatten(algebra(), k_, slice(v, m, flat_))};
}

// ---------------------------------------------------------------- identification

SplitIdentification split_identify(const AlgebraPtr& d, const Scalar& mu) {
  const AlgebraPtr b = Algebra::prodop(d);
  const RingPtr kk = b->norm_ring();
  const auto [lambda, lambda2] = split_components(embed(mu, kk));
  auto sigma = Involution::switch_involution(b);
  SplitIdentification out;
  out.source = std::make_shared<SecondTits>(sigma, d3_one(b), mu);
  out.target = std::make_shared<FirstTits>(d, lambda);
  if (!(lambda * lambda2).is_one())
    throw Error(Errc::IdentificationFailed, "mu must have the form (lambda, lambda^{-1})");

  const RingPtr& k = d->base();
  const SecondTits& src = *out.source;
  std::vector<Vec> cols;
  for (std::size_t i = 0; i < src.dim(); ++i) {
    const auto [h, x] = src.unpack(unit_vector(k, src.dim(), i));
    const Deg3Element hd = pair_components(h).first;
    const auto [x1, x2] = pair_components(x);
    cols.push_back(out.target->pack(hd, x1, x2));
  }
  out.forward = Matrix::from_columns(cols);
  out.backward = inverse(out.forward);

  const GenericPoint g = generic_point(k, src.dim());
  out.norm_preserved = out.target->norm(out.forward.apply(g.x)) == src.norm(g.x);
  out.unit_preserved = vec_equal(out.forward.apply(src.unit()), out.target->unit());
  if (!out.norm_preserved || !out.unit_preserved)
    throw Error(Errc::IdentificationFailed, "norm comparison oracle rejected the identification");
  return out;
}

Matrix embed_first_summand(const FirstTits& j) {
  const AlgebraPtr& d = j.algebra();
  const RingPtr& k = d->base();
  const Deg3Element zero = d3_zero(d, k);
  std::vector<Vec> cols;
  for (std::size_t i = 0; i < d->dim(); ++i) cols.push_back(j.pack(make_element(d, unit_vector(k, d->dim(), i)), zero, zero));
  return Matrix::from_columns(cols);
}

Matrix embed_first_summand(const SecondTits& j) {
  std::vector<Vec> cols;
  for (std::size_t i = 0; i < j.hermitian_basis().size(); ++i) cols.push_back(unit_vector(j.base_ring(), j.dim(), i));
  return Matrix::from_columns(cols);
}

}  // namespace albert
