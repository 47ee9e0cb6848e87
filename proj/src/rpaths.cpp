#include <albert/parse.hpp>
#include <albert/rpaths.hpp>

#include "upoly.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace albert {

namespace {

Matrix embed_matrix(const Matrix& m, const RingPtr& r) {
  return m.map([&](const Scalar& s) { return s.ring() == r ? s : embed(s, r); });
}

Scalar t_of(const RingPtr& kt) { return ratfunc_variable(kt); }

Scalar one_minus_t(const RingPtr& kt) { return Scalar::one(kt) - t_of(kt); }

// a_t = (1 - t) a + t.
Deg3Element interpolate(const Deg3Element& a, const RingPtr& kt) {
  return one_minus_t(kt) * a + t_of(kt) * d3_one(a.alg, kt);
}

Matrix first_family(const FirstTits& j, const std::function<std::array<Deg3Element, 3>(
                                            const Deg3Element&, const Deg3Element&, const Deg3Element&)>& f) {
  return matrix_of(j, [&](const Vec& v) {
    const auto [x, y, z] = j.unpack(v);
    const auto [x2, y2, z2] = f(x, y, z);
    return j.pack(x2, y2, z2);
  });
}

void require_matrix3(const FirstTits& j) {
  if (j.algebra()->kind() != AlgebraKind::Matrix3)
    throw Error(Errc::NonSplitCoordinates, "paths need matrix3 coordinates, got " + j.algebra()->to_string());
}

CheckResult check(std::string id, std::string label) { return {std::move(id), std::move(label), true, "direct", 1, ""}; }

}  // namespace

// ---------------------------------------------------------------- paths

bool RPath::automorphism_family() const {
  const Vec c = parent->unit();
  return multiplier.is_one() && vec_equal(matrix.apply(c), embed_all(c, field));
}

RingPtr path_field(const CubicJordan& j) { return Ring::rational_functions(j.base_ring(), "t"); }

Matrix specialize(const Matrix& m, const Scalar& t0) {
  return m.map([&](const Scalar& s) {
    return s.ring()->kind() == RingKind::RationalFunctions ? ratfunc_eval(s, t0) : s;
  });
}

RPath path_certify(const JordanPtr& j, const Matrix& m_in, std::string name) {
  const std::size_t n = j->dim();
  if (m_in.rows() != n || m_in.cols() != n)
    throw Error(Errc::DimensionMismatch, "expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
  const RingPtr& k = j->base_ring();
  const RingPtr kt = path_field(*j);
  const Matrix m = embed_matrix(m_in, kt);

  // Clear denominators: m = P / q with P polynomial in t.
  upoly::UPoly q{Scalar::one(k)};
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const upoly::UPoly& d = m(r, c).denominator();
      if (d.size() <= 1) continue;
      upoly::UPoly g = upoly::gcd(q, d), quo, rem;
      upoly::divmod(d, g, quo, rem);
      q = upoly::mul(q, quo);
    }
  const Scalar qs = ratfunc_from_poly(kt, q);
  const Matrix p = m.map([&](const Scalar& s) { return s * qs; });

  const GenericPoint gk = generic_point(k, n);
  const GenericPoint gt = generic_point(kt, n);
  const Scalar norm = j->norm(gk.x);
  const Scalar image = j->norm(p.apply(gt.x));
  if (norm.is_zero()) throw Error(Errc::GenericFiberFailure, "norm form is identically zero");
  const PolyTerm& lead = norm.terms().front();
  Scalar c = Scalar::zero(kt);
  for (const auto& t : image.terms())
    if (t.mono == lead.mono) c = t.coef;
  const Scalar nu_p = c / embed(lead.coef, kt);
  if (nu_p.is_zero() || !(image == nu_p * embed(norm, gt.ring)))
    throw Error(Errc::GenericFiberFailure, (name.empty() ? std::string("path") : name) +
                                               ": N(f(t) X) is not a k(t)-multiple of N(X)");
  const Scalar nu = nu_p / (qs * qs * qs);

  const Scalar zero = Scalar::zero(k), one = Scalar::one(k);
  Matrix m0, m1;
  try {
    m0 = specialize(m, zero);
    m1 = specialize(m, one);
  } catch (const Error& e) {
    if (e.code() != Errc::PoleAtPoint) throw;
    throw Error(Errc::PoleAtEndpoint, e.what());
  }
  for (const Scalar* t0 : {&zero, &one}) {
    Scalar v;
    try {
      v = ratfunc_eval(nu, *t0);
    } catch (const Error& e) {
      if (e.code() != Errc::PoleAtPoint) throw;
      throw Error(Errc::PoleAtEndpoint, "multiplier " + nu.to_string());
    }
    if (v.is_zero())
      throw Error(Errc::MultiplierVanishesAtEndpoint, "nu(" + t0->to_string() + ") = 0 for nu = " + nu.to_string());
  }
  RPath out{j, kt, m, nu, certify(j, m0, name + "(0)"), certify(j, m1, name + "(1)"), name};
  if (!(out.at0.multiplier == ratfunc_eval(nu, zero)) || !(out.at1.multiplier == ratfunc_eval(nu, one)))
    throw Error(Errc::GenericFiberFailure, "endpoint multipliers disagree with nu(t)");
  return out;
}

RPath conj_path(const FirstTitsPtr& j, const Deg3Element& a) {
  if (!is_invertible(a)) throw Error(Errc::NotInvertible, "a is not invertible");
  const RingPtr kt = path_field(*j);
  const Deg3Element at = interpolate(a, kt);
  const Deg3Element ati = inverse(at);
  const Matrix m = first_family(*j, [&](const Deg3Element& x, const Deg3Element& y, const Deg3Element& z) {
    return std::array<Deg3Element, 3>{at * x * ati, at * y * ati, at * z * ati};
  });
  return path_certify(j, m, "conj_path");
}

Deg3Element sl1_curve(const Deg3Element& d, const RingPtr& kt) {
  Deg3Element g = d3_one(d.alg, kt);
  for (const auto& f : transvection_factorization(d))
    g = g * transvection(d.alg, f.i, f.j, one_minus_t(kt) * f.alpha);
  return g;
}

RPath sl1_path_split(const FirstTitsPtr& j, const Deg3Element& d, JVariant variant) {
  require_matrix3(*j);
  const Deg3Element gamma = sl1_curve(d, path_field(*j));
  return path_certify(j, jmap_matrix(*j, gamma, variant), "sl1_path_" + std::string(jvariant_name(variant)));
}

RPath str_path(const FirstTitsPtr& j, const Deg3Element& a, const Deg3Element& b, const Deg3Element& d) {
  require_matrix3(*j);
  if (!is_invertible(a) || !is_invertible(b)) throw Error(Errc::NotInvertible, "a and b must be invertible");
  const RingPtr kt = path_field(*j);
  const Deg3Element at = interpolate(a, kt), bt = interpolate(b, kt);
  const Deg3Element ct = at * inverse(bt) * sl1_curve(d, kt);
  const Deg3Element ats = sharp(at), bts = sharp(bt), cti = inverse(ct);
  const Matrix m = first_family(*j, [&](const Deg3Element& x, const Deg3Element& y, const Deg3Element& z) {
    return std::array<Deg3Element, 3>{at * x * bt, bts * y * ct, cti * z * ats};
  });
  return path_certify(j, m, "str_path");
}

std::string_view chi_middle_name(ChiMiddle m) { return m == ChiMiddle::Literal ? "literal" : "corrected"; }

SimilarityMap chi_map(const FirstTitsPtr& j, const Deg3Element& a, ChiMiddle middle) {
  if (j->algebra()->kind() != AlgebraKind::CubicEtale)
    throw Error(Errc::Unsupported, "chi is defined on first constructions over cubic etale algebras");
  if (!is_invertible(a)) throw Error(Errc::NotInvertible, "N_E(a) = " + reduced_norm(a).to_string());
  const AlgebraPtr& e = j->algebra();
  const RingPtr& k = e->base();
  const Scalar n = reduced_norm(a);
  const Scalar ninv = n.inverse();
  const Deg3Element zero = d3_zero(e, k);
  const Deg3Element m = middle == ChiMiddle::Literal ? d3_central(e, ninv) : ninv * a;
  const Matrix u1 = u_matrix(*j, j->pack(zero, zero, d3_one(e)));
  const Matrix u2 = u_matrix(*j, j->pack(zero, m, zero));
  return certify(j, n * (u1 * u2), "chi_" + std::string(chi_middle_name(middle)));
}

// ---------------------------------------------------------------- certificates

BuiltCertificate cert_build_stab(const FirstTitsPtr& j, const Deg3Element& a, const Deg3Element& b) {
  require_matrix3(*j);
  SimilarityMap phi = aut_ext_D(j, a, b);
  const Deg3Element p = a * inverse(b);
  const SimilarityMap jp = aut_J(j, p, JVariant::B);
  const RPath theta = conj_path(j, a);
  RPath f1 = path_certify(j, jp.matrix * theta.matrix, "J_p o conj_path");
  RPath f2 = sl1_path_split(j, p, JVariant::B);
  BuiltCertificate out{RCertificate{j->base_ring()->to_string(), j->describe(), j->dim(), phi.matrix, {f1.matrix, f2.matrix}},
                       std::move(phi),
                       {std::move(f1), std::move(f2)}};
  return out;
}

bool CertReport::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return !checks.empty();
}

std::string CertReport::to_text() const {
  AxiomReport r{checks};
  return r.to_text();
}

CertReport cert_check(const RCertificate& cert, const JordanPtr& j) {
  CertReport report;
  auto fail = [](CheckResult& c, std::string detail) {
    c.pass = false;
    c.detail = std::move(detail);
  };

  CheckResult header = check("header", "field, construction and dimension match");
  if (cert.dim != j->dim() || cert.construction != j->describe() || !same_ring(parse_field(cert.field), j->base_ring()))
    fail(header, "certificate header does not describe " + j->describe());
  report.checks.push_back(header);
  if (!header.pass) return report;

  CheckResult target = check("target", "target is an automorphism");
  try {
    const SimilarityMap phi = certify(j, embed_matrix(cert.target, j->base_ring()), "target");
    if (!phi.automorphism) fail(target, "target multiplier " + phi.multiplier.to_string() + " or base point not fixed");
  } catch (const Error& e) {
    fail(target, e.what());
  }
  report.checks.push_back(target);

  const RingPtr kt = path_field(*j);
  const Scalar zero = Scalar::zero(j->base_ring()), one = Scalar::one(j->base_ring());
  std::vector<std::optional<Matrix>> start, end;
  for (std::size_t i = 0; i < cert.paths.size(); ++i) {
    const std::string id = "path-" + std::to_string(i + 1);
    CheckResult fiber = check(id, "generic-fiber similarity, regular at 0 and 1");
    CheckResult aut = check(id + "-aut", "multiplier 1 in k(t), base point fixed");
    try {
      const RPath p = path_certify(j, cert.paths[i], id);
      fiber.detail = "nu(t) = " + p.multiplier.to_string();
      if (!p.automorphism_family()) fail(aut, "nu(t) = " + p.multiplier.to_string());
    } catch (const Error& e) {
      fail(fiber, e.what());
      fail(aut, "path not certified");
    }
    report.checks.push_back(fiber);
    report.checks.push_back(aut);
    const Matrix m = embed_matrix(cert.paths[i], kt);
    try {
      start.emplace_back(specialize(m, zero));
    } catch (const Error&) {
      start.emplace_back(std::nullopt);
    }
    try {
      end.emplace_back(specialize(m, one));
    } catch (const Error&) {
      end.emplace_back(std::nullopt);
    }
  }

  const Matrix tgt = embed_matrix(cert.target, j->base_ring());
  const Matrix id = Matrix::identity(j->base_ring(), j->dim());
  auto link = [&](std::string cid, std::string label, const std::optional<Matrix>& lhs, const Matrix* rhs) {
    CheckResult c = check(std::move(cid), std::move(label));
    if (!lhs || !rhs || !(*lhs == *rhs)) fail(c, "endpoint-chain-mismatch");
    report.checks.push_back(c);
  };
  if (cert.paths.empty()) {
    link("chain-end", "target is the identity", tgt, &id);
    return report;
  }
  link("chain-start", "f_1(0) = target", start.front(), &tgt);
  for (std::size_t i = 0; i + 1 < cert.paths.size(); ++i) {
    const std::string a = std::to_string(i + 1), b = std::to_string(i + 2);
    link("chain-link-" + a, "f_" + a + "(1) = f_" + b + "(0)", end[i], start[i + 1] ? &*start[i + 1] : nullptr);
  }
  link("chain-end", "f_last(1) = identity", end.back(), &id);
  return report;
}

// ---------------------------------------------------------------- file format

namespace {

constexpr const char* kMagic = "albert-rcert 1";

void write_coeffs(std::ostream& os, const std::vector<Scalar>& c) {
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? " " : "") << c[i].to_string();
}

class LineReader {
 public:
  explicit LineReader(std::istream& is) : is_(is) {}

  std::string next() {
    std::string line;
    if (!std::getline(is_, line)) throw error("unexpected end of file");
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }

  std::string expect_prefix(const std::string& key) {
    const std::string line = next();
    if (line.rfind(key + " ", 0) != 0) throw error("expected '" + key + " ...', got '" + line + "'");
    return line.substr(key.size() + 1);
  }

  void expect(const std::string& exact) {
    const std::string line = next();
    if (line != exact) throw error("expected '" + exact + "', got '" + line + "'");
  }

  std::size_t number(const std::string& text) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(text, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != text.size() || text.empty()) throw error("expected a count, got '" + text + "'");
    return v;
  }

  Error error(const std::string& what) const { return Error(Errc::ParseError, "line " + std::to_string(line_) + ": " + what); }

 private:
  std::istream& is_;
  std::size_t line_ = 0;
};

std::vector<Scalar> parse_coeffs(LineReader& in, const std::string& text, const RingPtr& k) {
  std::vector<Scalar> out;
  std::istringstream ss(text);
  std::string tok;
  while (ss >> tok) {
    try {
      out.push_back(parse_scalar(tok, k));
    } catch (const Error& e) {
      throw in.error(e.what());
    }
  }
  if (out.empty()) throw in.error("empty coefficient list");
  return out;
}

}  // namespace

void write_certificate(std::ostream& os, const RCertificate& cert) {
  const std::size_t n = cert.dim;
  os << kMagic << '\n' << "field " << cert.field << '\n' << "construction " << cert.construction << '\n';
  os << "dim " << n << '\n' << "target\n";
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) os << cert.target(r, c).to_string() << '\n';
  os << "paths " << cert.paths.size() << '\n';
  for (std::size_t i = 0; i < cert.paths.size(); ++i) {
    os << "path " << i + 1 << '\n';
    const Matrix& m = cert.paths[i];
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        const Scalar& s = m(r, c);
        if (s.ring()->kind() == RingKind::RationalFunctions) {
          write_coeffs(os, s.numerator().empty() ? std::vector<Scalar>{Scalar::zero(s.ring()->base())} : s.numerator());
          os << " | ";
          write_coeffs(os, s.denominator());
        } else {
          os << s.to_string() << " | 1";
        }
        os << '\n';
      }
  }
  os << "terminal identity\nend\n";
}

RCertificate read_certificate(std::istream& is) {
  LineReader in(is);
  in.expect(kMagic);
  RCertificate cert;
  cert.field = in.expect_prefix("field");
  RingPtr k;
  try {
    k = parse_field(cert.field);
  } catch (const Error& e) {
    throw in.error(e.what());
  }
  const RingPtr kt = Ring::rational_functions(k, "t");
  cert.construction = in.expect_prefix("construction");
  cert.dim = in.number(in.expect_prefix("dim"));
  const std::size_t n = cert.dim;
  if (n == 0 || n > 64) throw in.error("unsupported dimension");
  in.expect("target");
  cert.target = Matrix::zero(k, n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const std::string line = in.next();
      try {
        cert.target(r, c) = parse_scalar(line, k);
      } catch (const Error& e) {
        throw in.error(e.what());
      }
    }
  const std::size_t count = in.number(in.expect_prefix("paths"));
  for (std::size_t i = 0; i < count; ++i) {
    in.expect("path " + std::to_string(i + 1));
    Matrix m = Matrix::zero(kt, n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        const std::string line = in.next();
        const auto bar = line.find('|');
        if (bar == std::string::npos) throw in.error("expected '<numerator> | <denominator>'");
        auto num = parse_coeffs(in, line.substr(0, bar), k);
        auto den = parse_coeffs(in, line.substr(bar + 1), k);
        try {
          m(r, c) = Scalar::fraction(kt, std::move(num), std::move(den));
        } catch (const Error& e) {
          throw in.error(e.what());
        }
      }
    cert.paths.push_back(std::move(m));
  }
  in.expect("terminal identity");
  in.expect("end");
  return cert;
}

}  // namespace albert
