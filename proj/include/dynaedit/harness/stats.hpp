#pragma once

#include <cstddef>
#include <span>

namespace dynaedit {

struct SignTest {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t ties = 0;
  // One-sided exact binomial p-value for "differences tend to be positive":
  // P(X >= positive) with X ~ Binomial(positive + negative, 1/2). Ties are
  // dropped; 1 when no untied pairs remain.
  double p_value = 1.0;
};

SignTest sign_test(std::span<const double> differences);

// P(X >= k) for X ~ Binomial(n, 1/2).
double binomial_upper_tail(std::size_t n, std::size_t k);

double mean(std::span<const double> values);

}  // namespace dynaedit
