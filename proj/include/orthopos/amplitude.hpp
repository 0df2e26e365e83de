#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "orthopos/basis.hpp"
#include "orthopos/scalar.hpp"

namespace orthopos {

/// Ascending divisors of m, including 1 and m.
inline std::vector<std::int64_t> divisors(std::int64_t m) {
  if (m < 1) throw std::invalid_argument("divisors: m must be >= 1");
  std::vector<std::int64_t> low, high;
  for (std::int64_t i = 1; i * i <= m; ++i) {
    if (m % i != 0) continue;
    low.push_back(i);
    if (i != m / i) high.push_back(m / i);
  }
  low.insert(low.end(), high.rbegin(), high.rend());
  return low;
}

/// Weights c_k of the divisor sum. Default: c_k = k^{-(1+beta)} (1 + (log k)^{-gamma})
/// with the parenthesis fixed to 2 at k=1 where log k vanishes; c_1 = 2.
/// Custom: explicit table per divisor.
///
/// For exact-rational runs the default weights (irrational for general
/// beta,gamma) are computed in binary floats at `rational_weight_digits`
/// decimal digits and converted to rationals exactly.
template <class T>
struct CoefficientStrategy {
  std::optional<std::map<std::int64_t, T>> custom;
  unsigned rational_weight_digits = 100;

  static CoefficientStrategy defaults() { return {}; }
  static CoefficientStrategy custom_table(std::map<std::int64_t, T> table) {
    CoefficientStrategy s;
    s.custom = std::move(table);
    return s;
  }

  T coefficient(std::int64_t k, const T& beta, const T& gamma) const {
    if (k < 1) throw std::invalid_argument("c_k: k must be >= 1");
    if (custom) {
      const auto it = custom->find(k);
      if (it == custom->end())
        throw std::invalid_argument("custom c_k table has no entry for k=" +
                                    std::to_string(k));
      return it->second;
    }
    if (k == 1) return T(2);
    if constexpr (is_exact_scalar_v<T>) {
      PrecisionGuard guard(rational_weight_digits);
      const Real value = default_weight(Real(k), Real(beta), Real(gamma));
      return to_rational_exact(value);
    } else {
      return default_weight(T(k), beta, gamma);
    }
  }

 private:
  template <class U>
  static U default_weight(const U& k, const U& beta, const U& gamma) {
    using std::log;
    using std::pow;
    return pow(k, -(U(1) + beta)) * (U(1) + pow(log(k), -gamma));
  }
};

/// Parameters of the divisor-sum amplitude
///   A(x) = sum_{k | M+1} c_k (s + t)/q_k! * prod_{j<q_k} ((alpha+t)/k + j),
/// s = 1 - alpha + M, t = (x-1) s / 2, q_k = (M+1)/k - 1. A is a polynomial
/// of degree M+1 in x. alpha is accepted on the closed interval [0,1] so the
/// bisection can probe the endpoints.
template <class T>
struct AmplitudeSpec {
  std::int64_t M = 0;
  T alpha{};
  T beta{};
  T gamma{};
  CoefficientStrategy<T> strategy{};

  AmplitudeSpec() = default;
  AmplitudeSpec(std::int64_t M_, T alpha_, T beta_, std::optional<T> gamma_ = {},
                CoefficientStrategy<T> strategy_ = {})
      : M(M_),
        alpha(std::move(alpha_)),
        beta(std::move(beta_)),
        gamma(gamma_ ? std::move(*gamma_) : beta + T(1)),
        strategy(std::move(strategy_)) {
    validate();
  }

  void validate() const {
    if (M < 0) throw std::invalid_argument("AmplitudeSpec: M must be >= 0");
    if (alpha < 0 || alpha > 1)
      throw std::invalid_argument("AmplitudeSpec: alpha must lie in [0,1]");
    if (beta <= 0)
      throw std::invalid_argument("AmplitudeSpec: beta must be > 0");
  }

  T s() const { return T(1) - alpha + T(M); }
  std::int64_t q(std::int64_t k) const { return (M + 1) / k - 1; }
};

/// One divisor term split into linear factors of x:
///   prefactor (s/2) x + (s/2)                        [= s (x+1)/2 = s + t]
///   pochhammer[j]: (s/2k) x + (alpha - s/2)/k + j    [= (alpha+t)/k + j]
/// weighted by c_k / q_k!.
template <class T>
struct TermFactorization {
  std::int64_t k = 1;
  std::int64_t q = 0;
  std::pair<T, T> prefactor;
  std::vector<std::pair<T, T>> pochhammer;
  T weight;

  std::size_t factor_count() const { return pochhammer.size() + 1; }

  /// Product of all linear factors at x (weight not applied).
  T eval_factors(const T& x) const {
    T out = prefactor.first * x + prefactor.second;
    for (const auto& [a, b] : pochhammer) out *= a * x + b;
    return out;
  }
};

template <class T>
TermFactorization<T> factorize_term(const AmplitudeSpec<T>& spec,
                                    std::int64_t k) {
  if (k < 1 || (spec.M + 1) % k != 0)
    throw std::invalid_argument("factorize_term: k must divide M+1");
  TermFactorization<T> term;
  term.k = k;
  term.q = spec.q(k);
  const T s = spec.s();
  const T half_s = s / 2;
  term.prefactor = {half_s, half_s};
  term.pochhammer.reserve(static_cast<std::size_t>(term.q));
  const T base = (spec.alpha - half_s) / T(k);
  for (std::int64_t j = 0; j < term.q; ++j)
    term.pochhammer.emplace_back(half_s / T(k), base + T(j));
  term.weight =
      spec.strategy.coefficient(k, spec.beta, spec.gamma) / factorial<T>(term.q);
  return term;
}

/// Cancellation bookkeeping for float-mode expansions. The warning fires when
/// intermediate coefficients exceed the final ones by more than the digit
/// budget (estimated decimal digits lost >= digits available).
struct ExpansionDiagnostics {
  double cancellation_log10 = 0.0;
  unsigned digits_budget = 0;
  bool precision_warning = false;
};

/// Expands A into basis coefficients a_0..a_{M+1} by applying each term's
/// linear factors to e_0 with the recurrence operator, then summing terms in
/// ascending-k order.
template <class T>
CoefficientVector<T> expand_amplitude(const AmplitudeSpec<T>& spec,
                                      const BasisSpec& basis,
                                      ExpansionDiagnostics* diag = nullptr) {
  spec.validate();
  const std::size_t out_len = static_cast<std::size_t>(spec.M) + 2;
  std::vector<T> total(out_len, T(0));
  T max_intermediate(0);

  for (const std::int64_t k : divisors(spec.M + 1)) {
    const TermFactorization<T> term = factorize_term(spec, k);
    CoefficientVector<T> vec = CoefficientVector<T>::unit(basis, 0);
    vec = apply_linear_factor(vec, term.prefactor.first, term.prefactor.second);
    const T abs_weight = abs(term.weight);
    if (diag)
      for (const T& c : vec.coeffs)
        max_intermediate = std::max(max_intermediate, T(abs(c) * abs_weight));
    for (const auto& [a, b] : term.pochhammer) {
      vec = apply_linear_factor(vec, a, b);
      if (diag)
        for (const T& c : vec.coeffs)
          max_intermediate = std::max(max_intermediate, T(abs(c) * abs_weight));
    }
    for (std::size_t n = 0; n < vec.coeffs.size(); ++n)
      total[n] += term.weight * vec.coeffs[n];
  }

  CoefficientVector<T> result(basis, std::move(total));
  if (diag) {
    *diag = ExpansionDiagnostics{};
    diag->digits_budget = working_digits<T>();
    if constexpr (!is_exact_scalar_v<T>) {
      T max_final(0);
      for (const T& c : result.coeffs)
        max_final = std::max(max_final, T(abs(c)));
      if (max_final > 0 && max_intermediate > 0) {
        using std::log10;
        diag->cancellation_log10 =
            std::max(0.0, to_double(T(log10(max_intermediate / max_final))));
        diag->precision_warning =
            diag->cancellation_log10 >= static_cast<double>(diag->digits_budget);
      }
    }
  }
  return result;
}

/// Direct product-form evaluation of A at a point; shares no code with the
/// expansion path and serves as its cross-check.
template <class T>
T evaluate_amplitude_direct(const AmplitudeSpec<T>& spec, const T& x) {
  const T s = spec.s();
  const T t = (x - T(1)) * s / 2;
  T acc(0);
  for (const std::int64_t k : divisors(spec.M + 1)) {
    const std::int64_t q = spec.q(k);
    T term = spec.strategy.coefficient(k, spec.beta, spec.gamma) * (s + t) /
             factorial<T>(q);
    const T z = (spec.alpha + t) / T(k);
    for (std::int64_t j = 0; j < q; ++j) term *= z + T(j);
    acc += term;
  }
  return acc;
}

template <class T>
struct MinCoefficient {
  std::size_t index = 0;
  T value{};
  bool is_negative = false;
};

/// Minimum coefficient with its index; negativity is judged against the
/// noise floor eta * max_n |a_n|.
template <class T>
MinCoefficient<T> min_coefficient(const CoefficientVector<T>& v, const T& eta) {
  if (eta < 0) throw std::invalid_argument("min_coefficient: eta must be >= 0");
  MinCoefficient<T> out{0, v.coeffs[0], false};
  T max_abs = abs(v.coeffs[0]);
  for (std::size_t n = 1; n < v.coeffs.size(); ++n) {
    if (v.coeffs[n] < out.value) {
      out.value = v.coeffs[n];
      out.index = n;
    }
    max_abs = std::max(max_abs, T(abs(v.coeffs[n])));
  }
  out.is_negative = out.value < -(eta * max_abs);
  return out;
}

}  // namespace orthopos
