#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ttrace/rng.hpp"

namespace ttrace {

using Bit = std::uint8_t;

/// Secret per-position Bernoulli parameters of a Tardos code. Every entry
/// lies strictly inside (0,1), and inside [cutoff, 1-cutoff] when a cutoff
/// is set.
class BiasVector {
 public:
  BiasVector() = default;
  /// Validating constructor. Throws std::invalid_argument on an empty vector,
  /// an out-of-range cutoff, or an entry outside the admissible interval.
  BiasVector(std::vector<double> p, double cutoff = 0.0);

  /// Unvalidated construction for fixtures that need p exactly 0 or 1.
  static BiasVector unchecked(std::vector<double> p, double cutoff = 0.0);

  std::size_t size() const noexcept { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  std::span<const double> values() const noexcept { return p_; }
  double cutoff() const noexcept { return cutoff_; }

  friend bool operator==(const BiasVector&, const BiasVector&) = default;

 private:
  std::vector<double> p_;
  double cutoff_ = 0.0;
};

/// m x n binary code, row-major. Column j is the codeword of user j.
class CodeMatrix {
 public:
  CodeMatrix() = default;
  CodeMatrix(std::size_t m, std::size_t n, std::vector<Bit> bits);

  std::size_t m() const noexcept { return m_; }
  std::size_t n() const noexcept { return n_; }

  Bit operator()(std::size_t i, std::size_t j) const { return bits_[i * n_ + j]; }
  /// Position i across all users.
  std::span<const Bit> row(std::size_t i) const { return {bits_.data() + i * n_, n_}; }
  /// Copy of user j's codeword.
  std::vector<Bit> codeword(std::size_t j) const;
  std::span<const Bit> bits() const noexcept { return bits_; }

  friend bool operator==(const CodeMatrix&, const CodeMatrix&) = default;

 private:
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::vector<Bit> bits_;
};

/// CDF of the arcsine law on [0,1]: (2/pi) asin(sqrt(p)).
/// Throws std::domain_error when p is outside [0,1].
double arcsine_cdf(double p);

/// Draws m i.i.d. biases by inverse-CDF: p = sin^2(pi U / 2) with U uniform
/// on (F(cutoff), F(1-cutoff)).
BiasVector sample_bias_vector(std::size_t m, double cutoff, RandomStream& rng);

/// Bernoulli(p_i) entries, independent across positions and users.
CodeMatrix generate_code(const BiasVector& bias, std::size_t n, RandomStream& rng);

}  // namespace ttrace
