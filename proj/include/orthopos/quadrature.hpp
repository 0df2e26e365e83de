#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "orthopos/basis.hpp"
#include "orthopos/scalar.hpp"

namespace orthopos {
namespace detail {

/// Implicit-shift QL for a symmetric tridiagonal matrix, rotating a single
/// row vector along (enough to recover Gauss weights from first eigenvector
/// components). diag/off are overwritten; on return diag holds eigenvalues,
/// row the rotated vector, both sorted ascending by eigenvalue.
template <class T>
void tridiagonal_ql(std::vector<T>& diag, std::vector<T>& off,
                    std::vector<T>& row) {
  using std::sqrt;
  const std::size_t n = diag.size();
  if (n == 0) throw std::invalid_argument("tridiagonal_ql: empty matrix");
  if (off.size() != n - 1 || row.size() != n)
    throw std::invalid_argument("tridiagonal_ql: size mismatch");
  if (n == 1) return;

  const T eps = std::numeric_limits<T>::epsilon();
  const auto pythag = [](const T& a, const T& b) { return T(sqrt(a * a + b * b)); };
  std::vector<T> e = off;
  e.push_back(T(0));

  for (std::size_t l = 0; l < n; ++l) {
    int iterations = 0;
    while (true) {
      std::size_t m = l;
      while (m + 1 < n) {
        const T dd = abs(diag[m]) + abs(diag[m + 1]);
        if (abs(e[m]) <= eps * dd) break;
        ++m;
      }
      if (m == l) break;
      if (iterations++ == 60)
        throw std::runtime_error("tridiagonal_ql: no convergence");

      T g = (diag[l + 1] - diag[l]) / (2 * e[l]);
      T r = pythag(g, T(1));
      g = diag[m] - diag[l] + e[l] / (g + (g >= 0 ? abs(r) : -abs(r)));
      T s(1), c(1), p(0);
      bool underflow = false;
      for (std::size_t i1 = m; i1-- > l;) {
        T f = s * e[i1];
        const T b = c * e[i1];
        r = pythag(f, g);
        e[i1 + 1] = r;
        if (r == 0) {
          diag[i1 + 1] -= p;
          e[m] = T(0);
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = diag[i1 + 1] - p;
        r = (diag[i1] - g) * s + 2 * c * b;
        p = s * r;
        diag[i1 + 1] = g + p;
        g = c * r - b;

        f = row[i1 + 1];
        row[i1 + 1] = s * row[i1] + c * f;
        row[i1] = c * row[i1] - s * f;
      }
      if (underflow) continue;
      diag[l] -= p;
      e[l] = g;
      e[m] = T(0);
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return diag[a] < diag[b]; });
  std::vector<T> sorted_diag(n), sorted_row(n);
  for (std::size_t i = 0; i < n; ++i) {
    sorted_diag[i] = diag[order[i]];
    sorted_row[i] = row[order[i]];
  }
  diag = std::move(sorted_diag);
  row = std::move(sorted_row);
}

}  // namespace detail

template <class T>
struct QuadratureRule {
  std::vector<T> nodes;    // ascending, zeros of P_N
  std::vector<T> weights;  // positive, sum to 2
};

/// N-point Gauss-Legendre rule from the eigen-decomposition of the
/// symmetrized truncated multiplication operator: off-diagonals
/// b_k = k/sqrt(4k^2-1), nodes = eigenvalues, weights = 2 * (first
/// eigenvector components)^2.
template <class T>
QuadratureRule<T> gauss_legendre_rule(int N) {
  using std::sqrt;
  if (N < 1) throw std::invalid_argument("gauss_legendre_rule: N must be >= 1");
  std::vector<T> diag(static_cast<std::size_t>(N), T(0));
  std::vector<T> off;
  off.reserve(static_cast<std::size_t>(N) - 1);
  for (int k = 1; k < N; ++k)
    off.push_back(T(k) / T(sqrt(T(4 * k * k - 1))));
  std::vector<T> row(static_cast<std::size_t>(N), T(0));
  row[0] = T(1);

  detail::tridiagonal_ql(diag, off, row);

  QuadratureRule<T> rule;
  rule.nodes = std::move(diag);
  rule.weights.resize(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) rule.weights[i] = 2 * row[i] * row[i];
  return rule;
}

template <class T>
struct QuadratureExpansion {
  CoefficientVector<T> coeffs;
  bool exactness_verified = false;  // false when f's degree is unknown
};

/// Legendre coefficients by Gauss quadrature of the inversion integral:
///   a_n = (2n+1)/2 * sum_i w_i f(x_i) P_n(x_i),  n = 0..n_max.
/// Exact (to working precision) when f is a polynomial and
/// N_rule >= (deg f + n_max)/2 + 1. Legendre only (d = 2).
template <class T>
QuadratureExpansion<T> coefficients_by_quadrature(
    const std::function<T(const T&)>& f, int N_rule, int n_max,
    const BasisSpec& basis, std::optional<int> f_degree = std::nullopt) {
  if (basis.d != 2)
    throw std::invalid_argument(
        "coefficients_by_quadrature: oracle is Legendre-only (d=2)");
  if (N_rule < 1 || n_max < 0)
    throw std::invalid_argument("coefficients_by_quadrature: bad sizes");
  bool exact = false;
  if (f_degree) {
    if (2 * N_rule - 1 < *f_degree + n_max)
      throw std::invalid_argument(
          "coefficients_by_quadrature: N_rule too small for exactness "
          "(need 2*N_rule-1 >= deg f + n_max)");
    exact = true;
  }

  const QuadratureRule<T> rule = gauss_legendre_rule<T>(N_rule);
  std::vector<T> acc(static_cast<std::size_t>(n_max) + 1, T(0));
  std::vector<T> legendre(static_cast<std::size_t>(n_max) + 1);
  for (int i = 0; i < N_rule; ++i) {
    const T& x = rule.nodes[i];
    const T wf = rule.weights[i] * f(x);
    legendre[0] = T(1);
    if (n_max >= 1) legendre[1] = x;
    for (int n = 1; n < n_max; ++n)
      legendre[n + 1] =
          (T(2 * n + 1) * x * legendre[n] - T(n) * legendre[n - 1]) / T(n + 1);
    for (int n = 0; n <= n_max; ++n) acc[n] += wf * legendre[n];
  }
  for (int n = 0; n <= n_max; ++n) acc[n] *= T(2 * n + 1) / 2;

  return {CoefficientVector<T>(basis, std::move(acc)), exact};
}

}  // namespace orthopos
