#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "orthopos/amplitude.hpp"
#include "orthopos/basis.hpp"
#include "orthopos/parallel.hpp"
#include "orthopos/scalar.hpp"

namespace orthopos {

struct InvalidBracket : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class T>
struct BisectionConfig {
  T alpha_min = T(0);
  T alpha_max = T(1);
  T epsilon = T(1) / 1000000;

  void validate() const {
    if (epsilon <= 0)
      throw std::invalid_argument("BisectionConfig: epsilon must be > 0");
    if (!(alpha_min < alpha_max))
      throw std::invalid_argument("BisectionConfig: need alpha_min < alpha_max");
  }
};

/// Classical bisection of a monotone predicate: false at alpha_min, true at
/// alpha_max (checked once up front). Halves the bracket until its width is
/// <= epsilon and returns the final midpoint.
template <class T, class Pred>
T bisect(const BisectionConfig<T>& config, Pred&& predicate,
         int* iterations = nullptr) {
  config.validate();
  if (!predicate(config.alpha_max))
    throw InvalidBracket("bisect: predicate is false at alpha_max (" +
                         format_scalar(config.alpha_max) + ")");
  if (predicate(config.alpha_min))
    throw InvalidBracket("bisect: predicate is true at alpha_min (" +
                         format_scalar(config.alpha_min) + ")");

  T lo = config.alpha_min;
  T hi = config.alpha_max;
  int count = 0;
  while (hi - lo > config.epsilon) {
    const T mid = (lo + hi) / 2;
    if (predicate(mid))
      hi = mid;
    else
      lo = mid;
    ++count;
  }
  if (iterations) *iterations = count;
  return (lo + hi) / 2;
}

enum class CellStatus {
  Ok,               // genuine threshold inside the bracket
  AllPositive,      // positivity already holds at alpha_min; alpha_crit = alpha_min
  FailedAtAlphaMax  // positivity fails even at alpha_max
};

inline std::string to_string(CellStatus s) {
  switch (s) {
    case CellStatus::Ok: return "ok";
    case CellStatus::AllPositive: return "all_positive";
    case CellStatus::FailedAtAlphaMax: return "failed_at_alpha_max";
  }
  return "unknown";
}

/// Relative noise floor for the sign test: 10^{-3*digits/5} (1e-30 at the
/// default 50 digits); zero in exact mode where signs are exact.
template <class T>
T default_noise_floor() {
  if constexpr (is_exact_scalar_v<T>) {
    return T(0);
  } else {
    using std::pow;
    return pow(T(10), -static_cast<int>(3 * working_digits<T>() / 5));
  }
}

template <class T>
struct PositivityOptions {
  std::optional<T> eta;  // defaults to default_noise_floor<T>()
  CoefficientStrategy<T> strategy{};

  T noise_floor() const { return eta ? *eta : default_noise_floor<T>(); }
};

/// All expansion coefficients of A(.,M,alpha) non-negative beyond the noise
/// floor. This is the bisection predicate.
template <class T>
bool amplitude_positive(std::int64_t M, const T& alpha, const T& beta,
                        const T& gamma, const BasisSpec& basis,
                        const PositivityOptions<T>& opts = {}) {
  const AmplitudeSpec<T> spec(M, alpha, beta, gamma, opts.strategy);
  const auto coeffs = expand_amplitude(spec, basis);
  return !min_coefficient(coeffs, opts.noise_floor()).is_negative;
}

template <class T>
struct CriticalAlphaResult {
  T alpha_crit{};
  CellStatus status = CellStatus::Ok;
};

/// Smallest alpha (within epsilon) whose expansion has no negative
/// coefficient. A bracket that is positive at both ends yields alpha_min with
/// the AllPositive flag (the M=0 row is legitimately all-positive); failure
/// at alpha_max raises InvalidBracket.
template <class T>
CriticalAlphaResult<T> critical_alpha(std::int64_t M, const T& beta,
                                      const T& gamma, const BasisSpec& basis,
                                      const BisectionConfig<T>& config = {},
                                      const PositivityOptions<T>& opts = {}) {
  config.validate();
  const auto positive = [&](const T& alpha) {
    return amplitude_positive(M, alpha, beta, gamma, basis, opts);
  };
  if (!positive(config.alpha_max))
    throw InvalidBracket("critical_alpha: positivity fails even at alpha=" +
                         format_scalar(config.alpha_max));
  if (positive(config.alpha_min))
    return {config.alpha_min, CellStatus::AllPositive};

  T lo = config.alpha_min;
  T hi = config.alpha_max;
  while (hi - lo > config.epsilon) {
    const T mid = (lo + hi) / 2;
    if (positive(mid))
      hi = mid;
    else
      lo = mid;
  }
  return {(lo + hi) / 2, CellStatus::Ok};
}

/// Validation scan of the positivity predicate on a uniform alpha grid. The
/// bisection assumes a single false->true transition in alpha; this reports
/// the observed pattern so a violation surfaces instead of being silently
/// bisected over.
template <class T>
struct PositivityScan {
  std::vector<T> alphas;
  std::vector<bool> positive;
  int transitions = 0;
  bool monotone = false;  // at most one transition, and it is false->true
};

template <class T>
PositivityScan<T> positivity_scan(std::int64_t M, const T& beta, const T& gamma,
                                  const BasisSpec& basis, int grid_points,
                                  const PositivityOptions<T>& opts = {}) {
  if (grid_points < 2)
    throw std::invalid_argument("positivity_scan: need grid_points >= 2");
  PositivityScan<T> scan;
  scan.alphas.reserve(grid_points);
  scan.positive.reserve(grid_points);
  for (int i = 0; i < grid_points; ++i) {
    scan.alphas.push_back(T(i) / (grid_points - 1));
    scan.positive.push_back(
        amplitude_positive(M, scan.alphas.back(), beta, gamma, basis, opts));
  }
  for (int i = 1; i < grid_points; ++i)
    scan.transitions += scan.positive[i] != scan.positive[i - 1];
  scan.monotone =
      scan.transitions == 0 || (scan.transitions == 1 && scan.positive.back());
  return scan;
}

/// gamma as a function of beta; defaults to gamma = beta + 1.
template <class T>
struct GammaRule {
  std::optional<T> fixed;

  T operator()(const T& beta) const { return fixed ? *fixed : beta + T(1); }
};

template <class T>
struct LandscapeCell {
  std::int64_t M = 0;
  T beta{};
  T gamma{};
  T alpha_crit{};
  CellStatus status = CellStatus::Ok;
};

template <class T>
struct LandscapeProfileEntry {
  T beta{};
  T gamma{};
  T alpha_crit{};
  std::int64_t argmax_M = 0;
};

template <class T>
struct LandscapeResult {
  std::vector<LandscapeCell<T>> grid;  // M-major, beta minor
  std::vector<LandscapeProfileEntry<T>> profile;  // per beta: max over M
  T epsilon{};
  std::int64_t M_max = 0;
  unsigned digits = 0;
};

/// Sweeps the (M, beta) grid; every cell is an independent bisection, so the
/// map is parallel. Bracket failures are recorded in-cell and the sweep
/// continues. The profile is the exact max over the computed M range.
template <class T>
LandscapeResult<T> landscape(const std::vector<std::int64_t>& M_values,
                             const std::vector<T>& beta_values,
                             const GammaRule<T>& gamma_rule,
                             const BasisSpec& basis,
                             const BisectionConfig<T>& config = {},
                             const PositivityOptions<T>& opts = {},
                             unsigned threads = 0) {
  if (M_values.empty() || beta_values.empty())
    throw std::invalid_argument("landscape: empty grid");
  config.validate();

  LandscapeResult<T> result;
  result.epsilon = config.epsilon;
  result.M_max = *std::max_element(M_values.begin(), M_values.end());
  result.digits = working_digits<T>();
  result.grid.resize(M_values.size() * beta_values.size());

  const unsigned digits = working_digits<T>();
  parallel_for(
      result.grid.size(),
      [&](std::size_t cell) {
        const std::int64_t M = M_values[cell / beta_values.size()];
        const T& beta = beta_values[cell % beta_values.size()];
        const T gamma = gamma_rule(beta);
        LandscapeCell<T> out{M, beta, gamma, T(0), CellStatus::Ok};
        try {
          const auto r = critical_alpha(M, beta, gamma, basis, config, opts);
          out.alpha_crit = r.alpha_crit;
          out.status = r.status;
        } catch (const InvalidBracket&) {
          out.alpha_crit = config.alpha_max;
          out.status = CellStatus::FailedAtAlphaMax;
        }
        result.grid[cell] = std::move(out);
      },
      threads,
      [digits] {
        if constexpr (!is_exact_scalar_v<T> && !std::is_same_v<T, double>)
          set_thread_precision(digits);
      });

  for (std::size_t b = 0; b < beta_values.size(); ++b) {
    LandscapeProfileEntry<T> entry{beta_values[b], gamma_rule(beta_values[b]),
                                   T(0), M_values[0]};
    bool found = false;
    for (std::size_t m = 0; m < M_values.size(); ++m) {
      const auto& cell = result.grid[m * beta_values.size() + b];
      if (cell.status == CellStatus::FailedAtAlphaMax) continue;
      if (!found || cell.alpha_crit > entry.alpha_crit) {
        entry.alpha_crit = cell.alpha_crit;
        entry.argmax_M = cell.M;
        found = true;
      }
    }
    if (found) result.profile.push_back(std::move(entry));
  }
  return result;
}

}  // namespace orthopos
