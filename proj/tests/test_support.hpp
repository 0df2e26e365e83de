#pragma once

#include <vector>

#include "orthopos/basis.hpp"
#include "orthopos/rng.hpp"
#include "orthopos/scalar.hpp"

namespace testsupport {

using orthopos::Philox4x32;
using orthopos::Rational;
using orthopos::Real;

// Every test binary runs at the default 50-digit working precision unless a
// case says otherwise.
struct PrecisionInit {
  PrecisionInit() { orthopos::set_thread_precision(50); }
};
inline const PrecisionInit precision_init{};

inline Rational binomial(long n, long k) {
  if (k < 0 || k > n) return Rational(0);
  Rational out(1);
  for (long i = 1; i <= k; ++i) out = out * Rational(n - k + i) / Rational(i);
  return out;
}

// Monomial coefficients of P_n from the explicit binomial sum
//   P_n(x) = 2^{-n} sum_k (-1)^k C(n,k) C(2n-2k, n) x^{n-2k}.
// Independent of every recurrence in the library.
inline std::vector<Rational> legendre_monomial(long n) {
  std::vector<Rational> coeffs(static_cast<std::size_t>(n) + 1, Rational(0));
  const Rational scale =
      Rational(1) / Rational(orthopos::mp::mpz_int(1) << static_cast<unsigned>(n));
  for (long k = 0; 2 * k <= n; ++k) {
    Rational term = binomial(n, k) * binomial(2 * n - 2 * k, n) * scale;
    if (k % 2 == 1) term = -term;
    coeffs[static_cast<std::size_t>(n - 2 * k)] = term;
  }
  return coeffs;
}

// Monomial coefficients of C_n^{(d-1)/2} from the closed form
//   C_n^l(x) = sum_k (-1)^k (l)_{n-k} / (k! (n-2k)!) (2x)^{n-2k}.
inline std::vector<Rational> gegenbauer_monomial(long n, int d) {
  const Rational lambda = Rational(d - 1) / 2;
  std::vector<Rational> coeffs(static_cast<std::size_t>(n) + 1, Rational(0));
  for (long k = 0; 2 * k <= n; ++k) {
    const long m = n - k;
    Rational rising(1);
    for (long i = 0; i < m; ++i) rising *= lambda + Rational(i);
    Rational term = rising / (orthopos::factorial<Rational>(k) *
                              orthopos::factorial<Rational>(n - 2 * k));
    term *= Rational(orthopos::mp::mpz_int(1) << static_cast<unsigned>(n - 2 * k));
    if (k % 2 == 1) term = -term;
    coeffs[static_cast<std::size_t>(n - 2 * k)] = term;
  }
  return coeffs;
}

template <class T>
T horner(const std::vector<T>& monomial_coeffs, const T& x) {
  T acc(0);
  for (auto it = monomial_coeffs.rbegin(); it != monomial_coeffs.rend(); ++it)
    acc = acc * x + *it;
  return acc;
}

// Random rational in [-1, 1] with denominator up to `max_den`.
inline Rational random_rational(Philox4x32& rng, long max_den = 1000) {
  const long den = 1 + static_cast<long>(rng.next_u32() % max_den);
  const long num = static_cast<long>(rng.next_u64() % (2 * den + 1)) - den;
  return Rational(num) / Rational(den);
}

// Test-side Legendre evaluator, independent of the library paths.
inline double legendre_value(int n, double x) {
  double prev = 1.0, cur = x;
  if (n == 0) return prev;
  for (int k = 1; k < n; ++k) {
    const double next = ((2 * k + 1) * x * cur - k * prev) / (k + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

// Roots of P_N bracketed by a sign-change scan, polished by bisection.
inline std::vector<double> legendre_roots_bracketed(int N) {
  std::vector<double> roots;
  const int grid = 10 * N;
  double x_prev = -1.0, f_prev = legendre_value(N, x_prev);
  for (int i = 1; i <= grid; ++i) {
    const double x = -1.0 + 2.0 * i / grid;
    const double f = legendre_value(N, x);
    if (f_prev == 0.0) roots.push_back(x_prev);
    if (f_prev * f < 0.0) {
      double lo = x_prev, hi = x;
      for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (legendre_value(N, lo) * legendre_value(N, mid) <= 0.0)
          hi = mid;
        else
          lo = mid;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    x_prev = x;
    f_prev = f;
  }
  return roots;
}

}  // namespace testsupport
