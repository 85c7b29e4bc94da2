#include "ttrace/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "ttrace/codegen.hpp"
#include "ttrace/rng.hpp"

namespace ttrace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<ExtremePair> realize(const ExperimentConfig& cfg, const CollusionChannel& channel,
                                 std::uint64_t seed) {
  RandomStream bias_rng(derive_seed(seed, {static_cast<std::uint64_t>(Stream::bias)}));
  RandomStream code_rng(derive_seed(seed, {static_cast<std::uint64_t>(Stream::code)}));
  RandomStream coalition_rng(derive_seed(seed, {static_cast<std::uint64_t>(Stream::coalition)}));
  RandomStream forge_rng(derive_seed(seed, {static_cast<std::uint64_t>(Stream::forge)}));

  const BiasVector bias = sample_bias_vector(cfg.m, cfg.cutoff, bias_rng);
  const CodeMatrix code = generate_code(bias, cfg.n, code_rng);
  const Coalition coalition = sample_coalition(cfg.n, cfg.c_true, coalition_rng);
  const PiratedSequence y = forge(tally(code, coalition), channel, forge_rng);

  std::vector<ExtremePair> out;
  out.reserve(cfg.decoders.size());
  for (Decoder d : cfg.decoders) {
    std::vector<double> scores;
    switch (d) {
      case Decoder::tardos: scores = tardos_scores(code, bias, y, cfg.tardos); break;
      case Decoder::informed: scores = informed_scores(code, bias, y, channel, cfg.c_true); break;
      case Decoder::map: scores = map_blind_scores(code, bias, y, cfg.map); break;
    }
    ExtremePair e{-kInf, -kInf};
    const auto guilty = coalition.indicator();
    for (std::size_t j = 0; j < cfg.n; ++j) {
      double& slot = guilty[j] ? e.max_colluder : e.max_innocent;
      slot = std::max(slot, scores[j]);
    }
    out.push_back(e);
  }
  return out;
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
  if (cfg.m < 1) throw std::invalid_argument("m must be >= 1");
  if (cfg.n < 2) throw std::invalid_argument("n must be >= 2");
  if (cfg.c_true < 1) throw std::invalid_argument("c must be >= 1");
  if (cfg.map.c_min < 1 || cfg.map.c_min > cfg.map.c_max)
    throw std::invalid_argument("need 1 <= cmin <= cmax");
  if (cfg.c_true > cfg.map.c_max) throw std::invalid_argument("need c <= cmax");
  if (cfg.map.c_max >= cfg.n) throw std::invalid_argument("need cmax < n");
  if (cfg.realizations < 1) throw std::invalid_argument("realization count R must be >= 1");
  if (cfg.decoders.empty()) throw std::invalid_argument("decoder set is empty");
  if (!(cfg.cutoff >= 0.0 && cfg.cutoff < 0.5)) throw std::invalid_argument("cutoff must lie in [0, 0.5)");
  if (cfg.strategy == Strategy::wca) {
    if (!cfg.wca_theta) throw std::invalid_argument("wca strategy needs an optimized theta");
    if (cfg.wca_theta->size() != cfg.c_true + 1u)
      throw std::invalid_argument("wca theta size does not match c");
  }
}

CollusionChannel attack_channel(const ExperimentConfig& cfg) {
  if (cfg.strategy == Strategy::wca) {
    if (!cfg.wca_theta) throw std::invalid_argument("wca strategy needs an optimized theta");
    return CollusionChannel::stationary(*cfg.wca_theta);
  }
  return strategy_theta(cfg.strategy, cfg.c_true);
}

std::vector<ExtremePair> run_realization(const ExperimentConfig& cfg, std::uint64_t seed) {
  validate(cfg);
  return realize(cfg, attack_channel(cfg), seed);
}

ScoreTable::ScoreTable(std::vector<Decoder> decoders, std::size_t realizations)
    : decoders_(std::move(decoders)), rows_(realizations), cells_(rows_ * decoders_.size()) {}

std::size_t ScoreTable::column(Decoder d) const {
  const auto it = std::find(decoders_.begin(), decoders_.end(), d);
  if (it == decoders_.end())
    throw std::invalid_argument("decoder not present in score table: " + std::string(to_string(d)));
  return static_cast<std::size_t>(it - decoders_.begin());
}

std::vector<double> ScoreTable::max_innocent(Decoder d) const {
  const std::size_t col = column(d);
  std::vector<double> v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = at(r, col).max_innocent;
  return v;
}

std::vector<double> ScoreTable::max_colluder(Decoder d) const {
  const std::size_t col = column(d);
  std::vector<double> v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = at(r, col).max_colluder;
  return v;
}

std::uint64_t realization_seed(std::uint64_t master, std::size_t r) {
  return derive_seed(master, {0x5eed, static_cast<std::uint64_t>(r)});
}

ScoreTable run_monte_carlo(const ExperimentConfig& cfg) {
  validate(cfg);
  const CollusionChannel channel = attack_channel(cfg);
  ScoreTable table(cfg.decoders, cfg.realizations);

  unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, cfg.realizations));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      for (std::size_t r = next++; r < cfg.realizations; r = next++) {
        const auto row = realize(cfg, channel, realization_seed(cfg.seed, r));
        for (std::size_t d = 0; d < row.size(); ++d) table.at(r, d) = row[d];
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = cfg.realizations;
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return table;
}

std::vector<double> observed_thresholds(const ScoreTable& table, Decoder d) {
  std::vector<double> grid = table.max_innocent(d);
  const auto coll = table.max_colluder(d);
  grid.insert(grid.end(), coll.begin(), coll.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

RocCurve estimate_roc(const ScoreTable& table, Decoder d, std::span<const double> thresholds) {
  auto inn = table.max_innocent(d);
  auto coll = table.max_colluder(d);
  std::sort(inn.begin(), inn.end());
  std::sort(coll.begin(), coll.end());
  const double total = static_cast<double>(table.realizations());

  std::vector<double> taus(thresholds.begin(), thresholds.end());
  taus.push_back(-kInf);
  taus.push_back(kInf);
  std::sort(taus.begin(), taus.end());
  taus.erase(std::unique(taus.begin(), taus.end()), taus.end());

  RocCurve roc;
  roc.points.reserve(taus.size());
  for (double tau : taus) {
    const auto inn_below = std::lower_bound(inn.begin(), inn.end(), tau) - inn.begin();
    const auto coll_below = std::lower_bound(coll.begin(), coll.end(), tau) - coll.begin();
    double pfa = (total - static_cast<double>(inn_below)) / total;
    double pfn = static_cast<double>(coll_below) / total;
    // +inf is never attained by a finite score: nobody is accused.
    if (tau == kInf) {
      pfa = 0.0;
      pfn = 1.0;
    }
    roc.points.push_back({tau, pfa, pfn});
  }
  for (std::size_t k = 1; k < roc.points.size(); ++k) {
    const auto& a = roc.points[k - 1];
    const auto& b = roc.points[k];
    roc.auc += (a.pfa - b.pfa) * ((1.0 - a.pfn) + (1.0 - b.pfn)) / 2.0;
  }
  return roc;
}

RocCurve estimate_roc(const ScoreTable& table, Decoder d) {
  const auto grid = observed_thresholds(table, d);
  return estimate_roc(table, d, grid);
}

RocPoint operating_point(const RocCurve& roc, double target_pfa) {
  for (const auto& pt : roc.points)
    if (pt.pfa <= target_pfa) return pt;
  return roc.points.back();
}

}  // namespace ttrace
