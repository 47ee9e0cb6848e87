#pragma once

// Independent oracles for tests: plain mpq_class arithmetic that shares no
// code with the library under test.

#include <albert/deg3.hpp>

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <vector>

namespace oracle {

using Q = mpq_class;
using M3 = std::array<std::array<Q, 3>, 3>;

inline Q det3(const M3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

inline M3 mul(const M3& a, const M3& b) {
  M3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline Q trace(const M3& a) { return a[0][0] + a[1][1] + a[2][2]; }

// Leibniz expansion over all permutations; for square matrices of any size.
inline Q det_leibniz(const std::vector<std::vector<Q>>& m) {
  const std::size_t n = m.size();
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  Q total = 0;
  do {
    Q term = 1;
    for (std::size_t i = 0; i < n && term != 0; ++i) term *= m[i][p[i]];
    if (term == 0) continue;
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) inversions += p[i] > p[j];
    total += inversions % 2 ? -term : term;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

// Gaussian elimination with mpq pivots.
inline Q det_gauss(std::vector<std::vector<Q>> m) {
  const std::size_t n = m.size();
  Q d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t r = c;
    while (r < n && m[r][c] == 0) ++r;
    if (r == n) return 0;
    if (r != c) {
      std::swap(m[r], m[c]);
      d = -d;
    }
    d *= m[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      const Q f = m[i][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return d;
}

inline M3 to_m3(const albert::Deg3Element& a) {
  M3 m{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = a.c[3 * i + j].rational();
  return m;
}

inline std::vector<std::vector<Q>> to_rows(const albert::Matrix& m) {
  std::vector<std::vector<Q>> rows(m.rows(), std::vector<Q>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j).rational();
  return rows;
}

}  // namespace oracle
