#pragma once

#include <optional>
#include <vector>

#include "klr/qarith.hpp"

namespace klr {

template <class T>
using Matrix = std::vector<std::vector<T>>;

inline bool field_zero(const Rational& r) { return r == 0; }
inline bool field_zero(const QRat& r) { return r.is_zero(); }

/// Row echelon form computed in place; returns pivot columns.
template <class T>
std::vector<int> row_reduce(Matrix<T>& m, bool reduced = true) {
  std::vector<int> pivots;
  const int rows = static_cast<int>(m.size());
  if (rows == 0) return pivots;
  const int cols = static_cast<int>(m[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (!field_zero(m[i][c])) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(m[r], m[p]);
    T inv = T(1) / m[r][c];
    for (int k = c; k < cols; ++k) m[r][k] *= inv;
    for (int i = reduced ? 0 : r + 1; i < rows; ++i) {
      if (i == r || field_zero(m[i][c])) continue;
      T f = m[i][c];
      for (int k = c; k < cols; ++k)
        if (!field_zero(m[r][k])) m[i][k] -= f * m[r][k];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class T>
int rank_of(Matrix<T> m) {
  return static_cast<int>(row_reduce(m, false).size());
}

/// Indices of the first rows (in order) that are linearly independent.
template <class T>
std::vector<int> independent_rows(const Matrix<T>& m) {
  std::vector<int> chosen;
  std::vector<std::vector<T>> basis;  // reduced rows
  std::vector<int> lead;
  for (int i = 0; i < static_cast<int>(m.size()); ++i) {
    std::vector<T> v = m[i];
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const int c = lead[b];
      if (field_zero(v[c])) continue;
      T f = v[c];
      for (std::size_t k = 0; k < v.size(); ++k)
        if (!field_zero(basis[b][k])) v[k] -= f * basis[b][k];
    }
    int c = -1;
    for (std::size_t k = 0; k < v.size(); ++k)
      if (!field_zero(v[k])) {
        c = static_cast<int>(k);
        break;
      }
    if (c < 0) continue;
    T inv = T(1) / v[c];
    for (auto& x : v) x *= inv;
    for (std::size_t b = 0; b < basis.size(); ++b) {
      if (field_zero(basis[b][c])) continue;
      T f = basis[b][c];
      for (std::size_t k = 0; k < v.size(); ++k)
        if (!field_zero(v[k])) basis[b][k] -= f * v[k];
    }
    basis.push_back(std::move(v));
    lead.push_back(c);
    chosen.push_back(i);
  }
  return chosen;
}

/// Solves A x = b; nullopt when inconsistent. Free variables set to zero.
template <class T>
std::optional<std::vector<T>> solve(const Matrix<T>& a, const std::vector<T>& b) {
  const int rows = static_cast<int>(a.size());
  const int cols = rows ? static_cast<int>(a[0].size()) : 0;
  Matrix<T> m(rows);
  for (int i = 0; i < rows; ++i) {
    m[i] = a[i];
    m[i].push_back(b[i]);
  }
  auto piv = row_reduce(m, true);
  std::vector<T> x(cols, T(0));
  for (std::size_t r = 0; r < piv.size(); ++r) {
    if (piv[r] == cols) return std::nullopt;
    x[piv[r]] = m[r][cols];
  }
  return x;
}

template <class T>
std::optional<Matrix<T>> inverse(const Matrix<T>& a) {
  const int n = static_cast<int>(a.size());
  if (n == 0) return Matrix<T>{};
  Matrix<T> m(n);
  for (int i = 0; i < n; ++i) {
    m[i] = a[i];
    m[i].resize(2 * n, T(0));
    m[i][n + i] = T(1);
  }
  auto piv = row_reduce(m, true);
  if (static_cast<int>(piv.size()) < n || piv[n - 1] >= n) return std::nullopt;
  Matrix<T> out(n);
  for (int i = 0; i < n; ++i) out[i].assign(m[i].begin() + n, m[i].end());
  return out;
}

/// Basis of {x : A x = 0}.
template <class T>
std::vector<std::vector<T>> nullspace(const Matrix<T>& a, int cols) {
  Matrix<T> m = a;
  auto piv = row_reduce(m, true);
  std::vector<bool> is_pivot(cols, false);
  for (int c : piv) is_pivot[c] = true;
  std::vector<std::vector<T>> out;
  for (int f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<T> v(cols, T(0));
    v[f] = T(1);
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m[r][f];
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace klr
