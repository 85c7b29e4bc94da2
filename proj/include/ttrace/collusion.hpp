#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ttrace/codegen.hpp"
#include "ttrace/rng.hpp"

namespace ttrace {

/// The colluding users. members is sorted and duplicate-free.
class Coalition {
 public:
  Coalition(std::size_t n, std::vector<std::size_t> members);

  std::size_t size() const noexcept { return members_.size(); }
  std::size_t n() const noexcept { return indicator_.size(); }
  std::span<const std::size_t> members() const noexcept { return members_; }
  std::span<const Bit> indicator() const noexcept { return indicator_; }
  bool contains(std::size_t j) const { return indicator_.at(j) != 0; }

 private:
  std::vector<std::size_t> members_;
  std::vector<Bit> indicator_;
};

/// Number of 1s among the colluder codewords at each position.
struct TallyVector {
  std::vector<unsigned> t;
  unsigned c = 0;
};

struct PiratedSequence {
  std::vector<Bit> y;
};

enum class Strategy { minority, majority, uniform, coinflip, wca };

std::string_view to_string(Strategy s);
/// Throws std::invalid_argument for an unknown tag.
Strategy parse_strategy(std::string_view tag);

/// P(y_i = 1 | t_i = k), either one theta vector shared by every position
/// (stationary) or a full m x (c+1) matrix. Construction enforces the marking
/// assumption: g(i,0) = 0 and g(i,c) = 1.
class CollusionChannel {
 public:
  static CollusionChannel stationary(std::vector<double> theta);
  static CollusionChannel per_position(std::size_t m, std::size_t c, std::vector<double> g);
  /// Skips every check. Only for fixtures that deliberately break marking.
  static CollusionChannel unchecked_stationary(std::vector<double> theta);

  bool is_stationary() const noexcept { return rows_ == 0; }
  std::size_t c() const noexcept { return c_; }
  /// Number of positions for a per-position channel; 0 when stationary.
  std::size_t rows() const noexcept { return rows_; }

  double g(std::size_t i, unsigned k) const {
    return is_stationary() ? values_[k] : values_[i * (c_ + 1) + k];
  }
  /// The (c+1) entries used at position i.
  std::span<const double> row(std::size_t i) const {
    return is_stationary() ? std::span<const double>(values_)
                           : std::span<const double>(values_.data() + i * (c_ + 1), c_ + 1);
  }
  std::span<const double> values() const noexcept { return values_; }

 private:
  CollusionChannel(std::size_t c, std::size_t rows, std::vector<double> v)
      : c_(c), rows_(rows), values_(std::move(v)) {}

  std::size_t c_ = 0;
  std::size_t rows_ = 0;
  std::vector<double> values_;
};

/// Uniformly random c-subset of {0..n-1} by partial Fisher-Yates.
Coalition sample_coalition(std::size_t n, std::size_t c, RandomStream& rng);

TallyVector tally(const CodeMatrix& code, const Coalition& coalition);

/// Stationary channel of a named strategy. Even-c ties in majority/minority
/// resolve by a fair coin. Throws for Strategy::wca, which needs an optimizer
/// (see wca.hpp).
CollusionChannel strategy_theta(Strategy strategy, std::size_t c);

/// y_i ~ Ber(g(i, t_i)). One uniform is consumed per position.
PiratedSequence forge(const TallyVector& tally, const CollusionChannel& channel, RandomStream& rng);

}  // namespace ttrace
