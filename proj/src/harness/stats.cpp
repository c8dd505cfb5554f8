#include "dynaedit/harness/stats.hpp"

#include <cmath>
#include <numeric>

namespace dynaedit {

double binomial_upper_tail(std::size_t n, std::size_t k) {
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  // Sum in log space to stay accurate for large n.
  const double log_half_n = static_cast<double>(n) * std::log(0.5);
  const double log_n_fact = std::lgamma(static_cast<double>(n) + 1.0);
  double total = 0.0;
  for (std::size_t i = k; i <= n; ++i) {
    const double log_choose = log_n_fact - std::lgamma(static_cast<double>(i) + 1.0) -
                              std::lgamma(static_cast<double>(n - i) + 1.0);
    total += std::exp(log_choose + log_half_n);
  }
  return std::min(total, 1.0);
}

SignTest sign_test(std::span<const double> differences) {
  SignTest out;
  for (double d : differences) {
    if (d > 0.0) {
      ++out.positive;
    } else if (d < 0.0) {
      ++out.negative;
    } else {
      ++out.ties;
    }
  }
  out.p_value = binomial_upper_tail(out.positive + out.negative, out.positive);
  return out;
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

}  // namespace dynaedit
