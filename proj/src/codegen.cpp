#include "ttrace/codegen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ttrace {

namespace {

constexpr double kLowest = std::numeric_limits<double>::denorm_min();
const double kHighest = std::nextafter(1.0, 0.0);

void check_cutoff(double cutoff) {
  if (!(cutoff >= 0.0 && cutoff < 0.5))
    throw std::invalid_argument("cutoff must lie in [0, 0.5), got " + std::to_string(cutoff));
}

}  // namespace

BiasVector::BiasVector(std::vector<double> p, double cutoff) : p_(std::move(p)), cutoff_(cutoff) {
  check_cutoff(cutoff_);
  if (p_.empty()) throw std::invalid_argument("bias vector must have m >= 1");
  for (double v : p_) {
    if (!(v > 0.0 && v < 1.0) || v < cutoff_ || v > 1.0 - cutoff_)
      throw std::invalid_argument("bias entry outside admissible interval: " + std::to_string(v));
  }
}

BiasVector BiasVector::unchecked(std::vector<double> p, double cutoff) {
  BiasVector b;
  b.p_ = std::move(p);
  b.cutoff_ = cutoff;
  return b;
}

CodeMatrix::CodeMatrix(std::size_t m, std::size_t n, std::vector<Bit> bits)
    : m_(m), n_(n), bits_(std::move(bits)) {
  if (bits_.size() != m_ * n_) throw std::invalid_argument("code payload does not match m x n");
  for (Bit b : bits_)
    if (b > 1) throw std::invalid_argument("code entries must be 0 or 1");
}

std::vector<Bit> CodeMatrix::codeword(std::size_t j) const {
  if (j >= n_) throw std::out_of_range("user index out of range");
  std::vector<Bit> out(m_);
  for (std::size_t i = 0; i < m_; ++i) out[i] = bits_[i * n_ + j];
  return out;
}

double arcsine_cdf(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("arcsine_cdf: p outside [0,1]");
  return 2.0 / std::numbers::pi * std::asin(std::sqrt(p));
}

BiasVector sample_bias_vector(std::size_t m, double cutoff, RandomStream& rng) {
  check_cutoff(cutoff);
  if (m == 0) throw std::invalid_argument("code length m must be >= 1");
  const double lo_u = arcsine_cdf(cutoff);
  const double hi_u = arcsine_cdf(1.0 - cutoff);
  const double lo = std::max(cutoff, kLowest);
  const double hi = std::min(1.0 - cutoff, kHighest);

  std::vector<double> p(m);
  for (auto& v : p) {
    const double u = lo_u + (hi_u - lo_u) * rng.uniform_open();
    const double s = std::sin(std::numbers::pi / 2.0 * u);
    // Underflow or rounding can land exactly on 0 or 1; pull back inside.
    v = std::clamp(s * s, lo, hi);
  }
  return BiasVector(std::move(p), cutoff);
}

CodeMatrix generate_code(const BiasVector& bias, std::size_t n, RandomStream& rng) {
  if (n < 2) throw std::invalid_argument("user count n must be >= 2");
  const std::size_t m = bias.size();
  std::vector<Bit> bits(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    const double p = bias[i];
    Bit* row = bits.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) row[j] = rng.bernoulli(p) ? 1 : 0;
  }
  return CodeMatrix(m, n, std::move(bits));
}

}  // namespace ttrace
