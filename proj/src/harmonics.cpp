#include <cmath>
#include <limits>
#include <stdexcept>

#include "orthopos/schoenberg.hpp"

namespace orthopos {

std::int64_t harmonic_count_at_degree(int l, int d) {
  if (l < 0 || d < 2)
    throw std::invalid_argument("harmonic_count_at_degree: need l >= 0, d >= 2");
  // N(d,l) = (2l+d-1)/(l+d-1) * C(l+d-1, d-1); both divisions below are exact.
  unsigned __int128 binom = 1;
  for (int i = 1; i <= d - 1; ++i) binom = binom * (l + i) / i;
  unsigned __int128 count = binom * (2 * l + d - 1) / (l + d - 1);
  if (count > static_cast<unsigned __int128>(
                  std::numeric_limits<std::int64_t>::max()))
    throw std::overflow_error("harmonic_count_at_degree: count exceeds int64");
  return static_cast<std::int64_t>(count);
}

std::int64_t harmonic_count(int l, int d) {
  std::int64_t total = 0;
  for (int m = 0; m <= l; ++m) {
    const std::int64_t term = harmonic_count_at_degree(m, d);
    if (total > std::numeric_limits<std::int64_t>::max() - term)
      throw std::overflow_error("harmonic_count: count exceeds int64");
    total += term;
  }
  return total;
}

std::vector<int> n_schedule(int l_min, int d, int max_points) {
  if (l_min < 0 || d < 2)
    throw std::invalid_argument("n_schedule: need l_min >= 0, d >= 2");
  if (max_points < 2)
    throw std::invalid_argument("n_schedule: need max_points >= 2");
  const std::int64_t cap = 2 * harmonic_count(l_min, d);
  if (cap > std::numeric_limits<int>::max())
    throw std::overflow_error("n_schedule: schedule cap exceeds int");

  const int top = static_cast<int>(cap);  // >= 2 since H >= 1
  const int points = std::min<int>(max_points, top);
  std::vector<int> schedule;
  schedule.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double fraction = static_cast<double>(i) / (points - 1);
    const int n = 1 + static_cast<int>(std::lround(fraction * (top - 1)));
    if (schedule.empty() || schedule.back() < n) schedule.push_back(n);
  }
  return schedule;
}

}  // namespace orthopos
