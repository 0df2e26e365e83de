#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace orthopos {

namespace mp = boost::multiprecision;

/// Exact rational scalar (GMP-backed, always in lowest terms).
using Rational = mp::number<mp::gmp_rational, mp::et_off>;

/// Arbitrary-precision binary float (MPFR-backed). Working precision is the
/// thread-local default set via set_thread_precision().
using Real = mp::number<mp::mpfr_float_backend<0>, mp::et_off>;

/// Runtime scalar-mode selector used at the CLI/config boundary. Library code
/// is templated on the scalar type; this picks the instantiation.
struct ScalarMode {
  enum class Kind { ExactRational, HighPrecisionFloat };

  Kind kind = Kind::HighPrecisionFloat;
  unsigned digits = 50;  // decimal digits, HighPrecisionFloat only

  static ScalarMode exact_rational() { return {Kind::ExactRational, 0}; }
  static ScalarMode float_digits(unsigned digits) {
    return {Kind::HighPrecisionFloat, digits};
  }

  void validate() const {
    if (kind == Kind::HighPrecisionFloat && digits < 16)
      throw std::invalid_argument(
          "ScalarMode: HighPrecisionFloat requires digits >= 16");
  }
};

inline void set_thread_precision(unsigned digits) {
  Real::default_precision(digits);
}

/// Temporarily switches the thread's working precision.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned digits)
      : saved_(Real::default_precision()) {
    Real::default_precision(digits);
  }
  ~PrecisionGuard() { Real::default_precision(saved_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_;
};

/// Exact conversion of an MPFR value m*2^e to a rational (no rounding).
inline Rational to_rational_exact(const Real& x) {
  if (x == 0) return Rational(0);
  mp::mpz_int mantissa;
  const mpfr_exp_t e =
      mpfr_get_z_2exp(mantissa.backend().data(), x.backend().data());
  Rational r(mantissa);
  if (e >= 0)
    r *= Rational(mp::mpz_int(1) << static_cast<unsigned>(e));
  else
    r /= Rational(mp::mpz_int(1) << static_cast<unsigned>(-e));
  return r;
}

/// Parses "p/q", integers, decimals and scientific notation into an exact
/// rational ("0.4" -> 2/5).
inline Rational parse_rational(const std::string& text) {
  const auto bad = [&] {
    return std::invalid_argument("not a rational literal: '" + text + "'");
  };
  if (text.empty()) throw bad();

  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    if (num.empty() || den.empty()) throw bad();
    try {
      Rational d{mp::mpz_int(den)};
      if (d == 0) throw std::invalid_argument("zero denominator: " + text);
      return Rational(mp::mpz_int(num)) / d;
    } catch (const std::runtime_error&) {
      throw bad();
    }
  }

  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') negative = text[i++] == '-';

  std::string digits;
  long frac_digits = 0;
  bool seen_digit = false, seen_dot = false;
  for (; i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) ||
                             text[i] == '.');
       ++i) {
    if (text[i] == '.') {
      if (seen_dot) throw bad();
      seen_dot = true;
    } else {
      digits.push_back(text[i]);
      seen_digit = true;
      if (seen_dot) ++frac_digits;
    }
  }
  if (!seen_digit) throw bad();

  long exponent = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    std::size_t pos = 0;
    try {
      exponent = std::stol(text.substr(i + 1), &pos);
    } catch (const std::exception&) {
      throw bad();
    }
    if (pos != text.size() - i - 1) throw bad();
  } else if (i != text.size()) {
    throw bad();
  }

  Rational value{mp::mpz_int(digits)};
  const long shift = exponent - frac_digits;
  if (shift > 0)
    value *= Rational(mp::pow(mp::mpz_int(10), static_cast<unsigned>(shift)));
  else if (shift < 0)
    value /= Rational(mp::pow(mp::mpz_int(10), static_cast<unsigned>(-shift)));
  return negative ? -value : value;
}

template <class T>
inline constexpr bool is_exact_scalar_v = false;
template <>
inline constexpr bool is_exact_scalar_v<Rational> = true;

template <class T>
T scalar_from_string(const std::string& text);

template <>
inline Rational scalar_from_string<Rational>(const std::string& text) {
  return parse_rational(text);
}
template <>
inline Real scalar_from_string<Real>(const std::string& text) {
  if (text.find('/') != std::string::npos)
    return Real(parse_rational(text));
  return Real(text);
}
template <>
inline double scalar_from_string<double>(const std::string& text) {
  std::size_t pos = 0;
  const double v = std::stod(text, &pos);
  if (pos != text.size())
    throw std::invalid_argument("not a number: '" + text + "'");
  return v;
}

/// Full-precision decimal (or exact p/q) rendering; round-trips the value.
inline std::string format_scalar(const Rational& x) {
  return x.str();
}
inline std::string format_scalar(const Real& x) {
  return x.str(0, std::ios_base::scientific);
}
inline std::string format_scalar(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

template <class T>
T factorial(long n) {
  T out(1);
  for (long i = 2; i <= n; ++i) out *= T(i);
  return out;
}

template <class T>
T pow_integer(T base, long exponent) {
  T out(1);
  for (long i = 0; i < exponent; ++i) out *= base;
  return out;
}

using std::abs;
using mp::abs;

template <class T>
double to_double(const T& x) {
  if constexpr (std::is_same_v<T, double>)
    return x;
  else
    return x.template convert_to<double>();
}

/// Decimal digits of working precision for a scalar type (used for default
/// noise floors and cancellation budgets).
template <class T>
unsigned working_digits() {
  if constexpr (std::is_same_v<T, Real>)
    return Real::default_precision();
  else if constexpr (std::is_same_v<T, double>)
    return 15;
  else
    return 0;  // exact
}

}  // namespace orthopos
