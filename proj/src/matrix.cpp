#include <albert/matrix.hpp>

namespace albert {

Matrix Matrix::identity(const RingPtr& ring, std::size_t n) {
  Matrix m = zero(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar::one(ring);
  return m;
}

Matrix Matrix::zero(const RingPtr& ring, std::size_t rows, std::size_t cols) {
  return Matrix(rows, cols, Scalar::zero(ring));
}

Matrix Matrix::from_columns(const std::vector<Vec>& columns) {
  if (columns.empty()) return {};
  Matrix m(columns[0].size(), columns.size(), Scalar());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != m.rows_) throw Error(Errc::DimensionMismatch, "ragged columns");
    for (std::size_t i = 0; i < m.rows_; ++i) m(i, j) = columns[j][i];
  }
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vec>& rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows[0].size(), Scalar());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols_) throw Error(Errc::DimensionMismatch, "ragged rows");
    for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Vec Matrix::row(std::size_t i) const { return Vec(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_); }

Vec Matrix::column(std::size_t j) const {
  Vec out;
  out.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out.push_back((*this)(i, j));
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_, Scalar());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Vec Matrix::apply(const Vec& v) const {
  if (v.size() != cols_) throw Error(Errc::DimensionMismatch, "matrix-vector size");
  Vec out;
  out.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    Scalar acc;
    for (std::size_t j = 0; j < cols_; ++j) {
      const Scalar& m = (*this)(i, j);
      if (m.is_zero()) continue;
      Scalar p = m * v[j];
      acc = acc.valid() ? acc + p : p;
    }
    if (!acc.valid()) acc = cols_ ? Scalar::zero(v[0].ring()) : Scalar::zero((*this)(i, 0).ring());
    out.push_back(std::move(acc));
  }
  return out;
}

bool Matrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (i == j ? !(*this)(i, j).is_one() : !(*this)(i, j).is_zero()) return false;
  return true;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw Error(Errc::DimensionMismatch, "matrix product shape");
  Matrix out(a.rows_, b.cols_, Scalar());
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t j = 0; j < b.cols_; ++j) {
      Scalar acc;
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k).is_zero() || b(k, j).is_zero()) continue;
        Scalar p = a(i, k) * b(k, j);
        acc = acc.valid() ? acc + p : p;
      }
      out(i, j) = acc.valid() ? acc : Scalar::zero(join(a(i, 0).ring(), b(0, j).ring()));
    }
  }
  return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(Errc::DimensionMismatch, "matrix sum shape");
  Matrix out = a;
  for (std::size_t i = 0; i < a.a_.size(); ++i) out.a_[i] = a.a_[i] + b.a_[i];
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(Errc::DimensionMismatch, "matrix difference shape");
  Matrix out = a;
  for (std::size_t i = 0; i < a.a_.size(); ++i) out.a_[i] = a.a_[i] - b.a_[i];
  return out;
}

Matrix operator*(const Scalar& s, const Matrix& m) {
  Matrix out = m;
  for (auto& x : out.a_) x = s * x;
  return out;
}

bool operator==(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
  for (std::size_t i = 0; i < a.a_.size(); ++i)
    if (!(a.a_[i] == b.a_[i])) return false;
  return true;
}

std::string Matrix::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i) s += "; ";
    for (std::size_t j = 0; j < cols_; ++j) s += (j ? ", " : "") + (*this)(i, j).to_string();
  }
  return s + "]";
}

Matrix rref(Matrix m, std::vector<std::size_t>* pivots) {
  std::vector<std::size_t> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    const Scalar inv = m(r, c).inverse();
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) = m(r, j) * inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      const Scalar f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (!m(r, j).is_zero()) m(i, j) = m(i, j) - f * m(r, j);
    }
    piv.push_back(c);
    ++r;
  }
  if (pivots) *pivots = std::move(piv);
  return m;
}

std::size_t rank(const Matrix& m) {
  std::vector<std::size_t> piv;
  rref(m, &piv);
  return piv.size();
}

std::vector<Vec> kernel(const Matrix& m) {
  std::vector<std::size_t> piv;
  const Matrix r = rref(m, &piv);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : piv) is_pivot[p] = true;
  const RingPtr ring = m(0, 0).ring();
  std::vector<Vec> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vec v = zero_vector(ring, m.cols());
    v[f] = Scalar::one(ring);
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -r(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

Scalar det(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error(Errc::DimensionMismatch, "determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  if (n == 3) return char_data3(m).norm;
  Matrix a = m;
  Scalar d = Scalar::one(a(0, 0).ring());
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c).is_zero()) ++p;
    if (p == n) return Scalar::zero(d.ring());
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
      d = -d;
    }
    d = d * a(c, c);
    const Scalar inv = a(c, c).inverse();
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a(i, c).is_zero()) continue;
      const Scalar f = a(i, c) * inv;
      for (std::size_t j = c; j < n; ++j)
        if (!a(c, j).is_zero()) a(i, j) = a(i, j) - f * a(c, j);
    }
  }
  return d;
}

Matrix inverse(const Matrix& m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw Error(Errc::DimensionMismatch, "inverse of a non-square matrix");
  const RingPtr ring = m(0, 0).ring();
  Matrix aug = Matrix::zero(ring, n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = Scalar::one(ring);
  }
  std::vector<std::size_t> piv;
  const Matrix r = rref(aug, &piv);
  if (piv.size() < n || piv[n - 1] != n - 1) throw Error(Errc::SingularMatrix, "matrix is not invertible");
  Matrix out = Matrix::zero(ring, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = r(i, n + j);
  return out;
}

Vec solve(const Matrix& m, const Vec& b) {
  const std::size_t n = m.cols();
  Matrix aug = Matrix::zero(m(0, 0).ring(), m.rows(), n + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n) = b[i];
  }
  std::vector<std::size_t> piv;
  const Matrix r = rref(aug, &piv);
  if (piv.size() != n || (!piv.empty() && piv.back() == n))
    throw Error(Errc::SingularMatrix, "linear system has no unique solution");
  Vec x;
  x.reserve(n);
  for (std::size_t i = 0; i < n; ++i) x.push_back(r(i, n));
  return x;
}

Matrix left_inverse(const Matrix& m) {
  std::vector<std::size_t> rows;
  rref(m.transpose(), &rows);  // pivot columns of m^T are independent rows of m
  if (rows.size() != m.cols()) throw Error(Errc::SingularMatrix, "columns are not independent");
  Matrix sel = Matrix::zero(m(0, 0).ring(), m.cols(), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) sel(r, c) = m(rows[r], c);
  const Matrix sel_inv = inverse(sel);
  Matrix out = Matrix::zero(m(0, 0).ring(), m.cols(), m.rows());
  for (std::size_t r = 0; r < m.cols(); ++r)
    for (std::size_t c = 0; c < rows.size(); ++c) out(r, rows[c]) = sel_inv(r, c);
  return out;
}

CharData char_data3(const Matrix& m, bool with_norm) {
  if (m.rows() != 3 || m.cols() != 3) throw Error(Errc::DimensionMismatch, "char_data3 needs a 3x3 matrix");
  auto minor = [&](std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) {
    return m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
  };
  Scalar t = m(0, 0) + m(1, 1) + m(2, 2);
  Scalar s = minor(0, 1, 0, 1) + minor(0, 2, 0, 2) + minor(1, 2, 1, 2);
  if (!with_norm) return {std::move(t), std::move(s), Scalar::zero(m(0, 0).ring())};
  Scalar n = m(0, 0) * minor(1, 2, 1, 2) - m(0, 1) * minor(1, 2, 0, 2) + m(0, 2) * minor(1, 2, 0, 1);
  return {std::move(t), std::move(s), std::move(n)};
}

Vec vec_add(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw Error(Errc::DimensionMismatch, "vector sum");
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Vec vec_sub(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw Error(Errc::DimensionMismatch, "vector difference");
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Vec vec_scale(const Scalar& s, const Vec& v) {
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = s * v[i];
  return out;
}

Vec vec_neg(const Vec& v) {
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = -v[i];
  return out;
}

bool vec_is_zero(const Vec& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

bool vec_equal(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

Vec unit_vector(const RingPtr& ring, std::size_t n, std::size_t i) {
  Vec v = zero_vector(ring, n);
  v[i] = Scalar::one(ring);
  return v;
}

Vec zero_vector(const RingPtr& ring, std::size_t n) { return Vec(n, Scalar::zero(ring)); }

std::string vec_to_string(const Vec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].to_string();
  return s + ")";
}

}  // namespace albert
