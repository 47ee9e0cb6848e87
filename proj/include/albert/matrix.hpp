#pragma once

// Dense matrices of scalars and exact linear algebra over fields.

#include <albert/scalar.hpp>

#include <vector>

namespace albert {

using Vec = std::vector<Scalar>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const Scalar& fill)
      : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

  static Matrix identity(const RingPtr& ring, std::size_t n);
  static Matrix zero(const RingPtr& ring, std::size_t rows, std::size_t cols);
  static Matrix from_columns(const std::vector<Vec>& columns);
  static Matrix from_rows(const std::vector<Vec>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Scalar& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  Vec row(std::size_t i) const;
  Vec column(std::size_t j) const;
  Matrix transpose() const;
  Vec apply(const Vec& v) const;
  bool is_identity() const;
  // Entrywise image under a scalar map.
  template <class F>
  Matrix map(F&& f) const {
    Matrix out = *this;
    for (auto& x : out.a_) x = f(x);
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const Scalar& s, const Matrix& m);
  friend bool operator==(const Matrix& a, const Matrix& b);

  std::string to_string() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Scalar> a_;
};

// Reduced row echelon form over a field; `pivots` receives pivot columns.
Matrix rref(Matrix m, std::vector<std::size_t>* pivots = nullptr);
std::size_t rank(const Matrix& m);
// Basis of the right kernel {v : m v = 0}.
std::vector<Vec> kernel(const Matrix& m);
// Determinant: cofactor expansion (division-free) up to 3x3, elimination
// over a field beyond that.
Scalar det(const Matrix& m);
Matrix inverse(const Matrix& m);
// Unique solution of m x = b; throws SingularMatrix if none or not unique.
Vec solve(const Matrix& m, const Vec& b);
// For m of full column rank: a matrix L with L m = I, supported on a maximal
// set of independent rows of m. Throws SingularMatrix otherwise.
Matrix left_inverse(const Matrix& m);

// Coefficients (T, S, N) of X^3 - T X^2 + S X - N = det(X I - m) for a 3x3
// matrix over any commutative ring, without division.
struct CharData {
  Scalar trace, second, norm;
};
CharData char_data3(const Matrix& m, bool with_norm = true);

Vec vec_add(const Vec& a, const Vec& b);
Vec vec_sub(const Vec& a, const Vec& b);
Vec vec_scale(const Scalar& s, const Vec& v);
Vec vec_neg(const Vec& v);
bool vec_is_zero(const Vec& v);
bool vec_equal(const Vec& a, const Vec& b);
Vec unit_vector(const RingPtr& ring, std::size_t n, std::size_t i);
Vec zero_vector(const RingPtr& ring, std::size_t n);
std::string vec_to_string(const Vec& v);

}  // namespace albert
