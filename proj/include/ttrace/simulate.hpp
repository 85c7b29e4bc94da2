#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ttrace/collusion.hpp"
#include "ttrace/decoders.hpp"

namespace ttrace {

struct ExperimentConfig {
  std::size_t m = 300;
  std::size_t n = 1000;
  unsigned c_true = 6;
  MapConfig map{};
  Strategy strategy = Strategy::coinflip;
  /// Required when strategy is wca; ignored otherwise.
  std::optional<std::vector<double>> wca_theta;
  std::vector<Decoder> decoders{Decoder::tardos, Decoder::informed, Decoder::map};
  std::size_t realizations = 2000;
  std::uint64_t seed = 1;
  double cutoff = 0.0;
  TardosConvention tardos = TardosConvention::zero_mean;
  /// 0 selects std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Throws std::invalid_argument on any inconsistency, e.g. c_true > c_max,
/// c_max >= n, no decoders, zero realizations.
void validate(const ExperimentConfig& cfg);

/// Stationary attack channel for cfg.strategy at cfg.c_true.
CollusionChannel attack_channel(const ExperimentConfig& cfg);

/// Extreme scores of one realization for one decoder.
struct ExtremePair {
  double max_innocent = 0.0;
  double max_colluder = 0.0;
  friend bool operator==(const ExtremePair&, const ExtremePair&) = default;
};

/// One entry per configured decoder, in cfg.decoders order.
std::vector<ExtremePair> run_realization(const ExperimentConfig& cfg, std::uint64_t realization_seed);

/// Row-major R x |decoders| table of extreme scores.
class ScoreTable {
 public:
  ScoreTable(std::vector<Decoder> decoders, std::size_t realizations);

  std::size_t realizations() const noexcept { return rows_; }
  std::span<const Decoder> decoders() const noexcept { return decoders_; }
  /// Column of a decoder; throws std::invalid_argument if absent.
  std::size_t column(Decoder d) const;

  ExtremePair& at(std::size_t r, std::size_t col) { return cells_[r * decoders_.size() + col]; }
  const ExtremePair& at(std::size_t r, std::size_t col) const { return cells_[r * decoders_.size() + col]; }

  std::vector<double> max_innocent(Decoder d) const;
  std::vector<double> max_colluder(Decoder d) const;

  friend bool operator==(const ScoreTable&, const ScoreTable&) = default;

 private:
  std::vector<Decoder> decoders_;
  std::size_t rows_;
  std::vector<ExtremePair> cells_;
};

/// Seed of realization r under a master seed.
std::uint64_t realization_seed(std::uint64_t master, std::size_t r);

/// R independent realizations spread over worker threads. The table depends
/// only on cfg, never on the thread count or scheduling.
ScoreTable run_monte_carlo(const ExperimentConfig& cfg);

struct RocPoint {
  double tau;
  double pfa;
  double pfn;
};

struct RocCurve {
  std::vector<RocPoint> points;  ///< increasing tau
  double auc = 0.0;
};

/// Every distinct observed score of the decoder, ascending.
std::vector<double> observed_thresholds(const ScoreTable& table, Decoder d);

/// pfa(tau) = #{max_innocent >= tau} / R, pfn(tau) = #{max_colluder < tau} / R.
/// The curve is bracketed by tau = -inf (1, 0) and tau = +inf (0, 1); auc is
/// the trapezoid area under (pfa, 1 - pfn).
RocCurve estimate_roc(const ScoreTable& table, Decoder d, std::span<const double> thresholds);
/// Same, on the exact empirical grid observed_thresholds(table, d).
RocCurve estimate_roc(const ScoreTable& table, Decoder d);

/// Operating point at the smallest threshold whose pfa does not exceed
/// target_pfa.
RocPoint operating_point(const RocCurve& roc, double target_pfa);

}  // namespace ttrace
