#pragma once

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "orthopos/scalar.hpp"

namespace orthopos {

/// Hyperspherical basis on S^d: Gegenbauer index lambda = (d-1)/2.
/// d = 2 is the Legendre case (C_n^{1/2} = P_n in standard normalization).
struct BasisSpec {
  int d = 2;

  BasisSpec() = default;
  explicit BasisSpec(int sphere_dim) : d(sphere_dim) {
    if (d < 2) throw std::invalid_argument("BasisSpec: d must be >= 2");
  }

  template <class T>
  T lambda() const {
    return T(d - 1) / 2;
  }
  bool legendre() const { return d == 2; }

  friend bool operator==(const BasisSpec&, const BasisSpec&) = default;
};

/// Finite expansion f(x) = sum_n coeffs[n] * B_n(x) with B_n = P_n (d=2)
/// or C_n^lambda. Trailing zeros allowed; length is the truncation, not the
/// degree.
template <class T>
struct CoefficientVector {
  BasisSpec basis{};
  std::vector<T> coeffs{T(0)};

  CoefficientVector() = default;
  CoefficientVector(BasisSpec b, std::vector<T> c)
      : basis(b), coeffs(std::move(c)) {
    if (coeffs.empty())
      throw std::invalid_argument("CoefficientVector: need length >= 1");
  }

  /// e_n, optionally padded to a longer truncation.
  static CoefficientVector unit(BasisSpec b, std::size_t n,
                                std::size_t length = 0) {
    std::vector<T> c(std::max(length, n + 1), T(0));
    c[n] = T(1);
    return CoefficientVector(b, std::move(c));
  }

  std::size_t size() const { return coeffs.size(); }

  /// Index of the last nonzero coefficient; -1 for the zero vector.
  long degree() const {
    for (long n = static_cast<long>(coeffs.size()) - 1; n >= 0; --n)
      if (coeffs[static_cast<std::size_t>(n)] != 0) return n;
    return -1;
  }
};

/// Multiplication-by-x operator in the chosen basis. Tridiagonal action only;
/// the matrix is never formed. Column n carries super(n) at row n+1 and
/// sub(n) at row n-1:
///   x B_n = (n+1)/(2n+d-1) B_{n+1} + (n+d-2)/(2n+d-1) B_{n-1}.
template <class T>
struct JacobiOperator {
  BasisSpec basis{};

  T super(long n) const { return T(n + 1) / T(2 * n + basis.d - 1); }
  T sub(long n) const { return T(n + basis.d - 2) / T(2 * n + basis.d - 1); }
};

/// Coefficients of x*f(x); output truncation = input length + 1.
template <class T>
CoefficientVector<T> apply_x(const CoefficientVector<T>& v) {
  const JacobiOperator<T> op{v.basis};
  const std::size_t n_in = v.coeffs.size();
  std::vector<T> out(n_in + 1, T(0));
  for (std::size_t n = 0; n < n_in; ++n) {
    const T& a = v.coeffs[n];
    if (a == 0) continue;
    out[n + 1] += a * op.super(static_cast<long>(n));
    if (n > 0) out[n - 1] += a * op.sub(static_cast<long>(n));
  }
  return CoefficientVector<T>(v.basis, std::move(out));
}

/// Coefficients of (a*x + b)*f(x), fused single pass.
template <class T>
CoefficientVector<T> apply_linear_factor(const CoefficientVector<T>& v,
                                         const T& a, const T& b) {
  const JacobiOperator<T> op{v.basis};
  const std::size_t n_in = v.coeffs.size();
  std::vector<T> out(n_in + 1, T(0));
  for (std::size_t n = 0; n < n_in; ++n) {
    const T& c = v.coeffs[n];
    if (c == 0) continue;
    out[n] += b * c;
    out[n + 1] += a * c * op.super(static_cast<long>(n));
    if (n > 0) out[n - 1] += a * c * op.sub(static_cast<long>(n));
  }
  return CoefficientVector<T>(v.basis, std::move(out));
}

/// sum_k coeffs[k] * B_k(z) by forward recurrence
///   B_0 = 1,  B_1 = (d-1) z,
///   (k+1) B_{k+1} = (2k+d-1) z B_k - (k+d-2) B_{k-1}.
template <class T>
T eval_basis_series(std::span<const T> coeffs, const T& z,
                    const BasisSpec& basis) {
  static const T domain_slack = T(1) / 1000000000;  // absorbs rounding at +-1
  if (abs(z) > T(1) + domain_slack)
    throw std::domain_error("eval_basis_series: |z| > 1");
  if (coeffs.empty()) return T(0);

  T acc = coeffs[0];
  if (coeffs.size() == 1) return acc;

  const int d = basis.d;
  T bk_prev(1);
  T bk = T(d - 1) * z;
  acc += coeffs[1] * bk;
  for (std::size_t k = 1; k + 1 < coeffs.size(); ++k) {
    T bk_next =
        (T(2 * static_cast<long>(k) + d - 1) * z * bk -
         T(static_cast<long>(k) + d - 2) * bk_prev) /
        T(static_cast<long>(k) + 1);
    bk_prev = bk;
    bk = std::move(bk_next);
    acc += coeffs[k + 1] * bk;
  }
  return acc;
}

template <class T>
T eval_basis_series(const CoefficientVector<T>& v, const T& z) {
  return eval_basis_series(std::span<const T>(v.coeffs), z, v.basis);
}

/// B_n(z) for a single degree.
template <class T>
T gegenbauer_value(long n, const T& z, const BasisSpec& basis) {
  std::vector<T> e(static_cast<std::size_t>(n) + 1, T(0));
  e.back() = T(1);
  return eval_basis_series(std::span<const T>(e), z, basis);
}

/// C_n^{(d-1)/2}(z) / d^n; approaches z^n/n! as d grows. Diagnostic.
template <class T = double>
T gegenbauer_limit_check(long n, const T& z, int d) {
  return gegenbauer_value(n, z, BasisSpec(d)) / pow_integer(T(d), n);
}

}  // namespace orthopos
