#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace ttrace {

/// Binomial coefficient as a double; exact for the small n used here.
inline double choose(unsigned n, unsigned k) {
  if (k > n) return 0.0;
  if (k > n - k) k = n - k;
  double r = 1.0;
  for (unsigned i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

/// P(K = k) for K ~ Binomial(n, p), k = 0..n.
inline std::vector<double> binomial_pmf(unsigned n, double p) {
  std::vector<double> pmf(n + 1);
  for (unsigned k = 0; k <= n; ++k)
    pmf[k] = choose(n, k) * std::pow(p, static_cast<double>(k)) *
             std::pow(1.0 - p, static_cast<double>(n - k));
  return pmf;
}

}  // namespace ttrace
