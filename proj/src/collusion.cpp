#include "ttrace/collusion.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ttrace {

namespace {

void check_theta_row(std::span<const double> row) {
  for (double v : row)
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("channel entries must lie in [0,1]");
  if (row.front() != 0.0 || row.back() != 1.0)
    throw std::invalid_argument("channel violates the marking assumption (g0 = 0, gc = 1)");
}

}  // namespace

Coalition::Coalition(std::size_t n, std::vector<std::size_t> members)
    : members_(std::move(members)), indicator_(n, 0) {
  if (members_.empty()) throw std::invalid_argument("coalition must have at least one member");
  std::sort(members_.begin(), members_.end());
  for (std::size_t k = 0; k < members_.size(); ++k) {
    if (members_[k] >= n) throw std::out_of_range("coalition member outside [0, n)");
    if (k > 0 && members_[k] == members_[k - 1])
      throw std::invalid_argument("coalition members must be distinct");
    indicator_[members_[k]] = 1;
  }
}

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::minority: return "minority";
    case Strategy::majority: return "majority";
    case Strategy::uniform: return "uniform";
    case Strategy::coinflip: return "coinflip";
    case Strategy::wca: return "wca";
  }
  return "?";
}

Strategy parse_strategy(std::string_view tag) {
  for (Strategy s : {Strategy::minority, Strategy::majority, Strategy::uniform, Strategy::coinflip,
                     Strategy::wca})
    if (tag == to_string(s)) return s;
  throw std::invalid_argument("unknown strategy: " + std::string(tag));
}

CollusionChannel CollusionChannel::stationary(std::vector<double> theta) {
  if (theta.size() < 2) throw std::invalid_argument("theta needs c+1 >= 2 entries");
  check_theta_row(theta);
  const std::size_t c = theta.size() - 1;
  return CollusionChannel(c, 0, std::move(theta));
}

CollusionChannel CollusionChannel::per_position(std::size_t m, std::size_t c, std::vector<double> g) {
  if (m == 0 || c == 0) throw std::invalid_argument("per-position channel needs m >= 1 and c >= 1");
  if (g.size() != m * (c + 1)) throw std::invalid_argument("channel matrix must be m x (c+1)");
  for (std::size_t i = 0; i < m; ++i)
    check_theta_row(std::span<const double>(g.data() + i * (c + 1), c + 1));
  return CollusionChannel(c, m, std::move(g));
}

CollusionChannel CollusionChannel::unchecked_stationary(std::vector<double> theta) {
  const std::size_t c = theta.empty() ? 0 : theta.size() - 1;
  return CollusionChannel(c, 0, std::move(theta));
}

Coalition sample_coalition(std::size_t n, std::size_t c, RandomStream& rng) {
  if (c < 1 || c >= n) throw std::invalid_argument("coalition size must satisfy 1 <= c < n");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t k = 0; k < c; ++k) {
    const std::size_t pick = k + static_cast<std::size_t>(rng.below(n - k));
    std::swap(perm[k], perm[pick]);
  }
  perm.resize(c);
  return Coalition(n, std::move(perm));
}

TallyVector tally(const CodeMatrix& code, const Coalition& coalition) {
  if (coalition.n() != code.n()) throw std::out_of_range("coalition and code disagree on n");
  TallyVector out;
  out.c = static_cast<unsigned>(coalition.size());
  out.t.resize(code.m());
  for (std::size_t i = 0; i < code.m(); ++i) {
    const auto row = code.row(i);
    unsigned t = 0;
    for (std::size_t j : coalition.members()) t += row[j];
    out.t[i] = t;
  }
  return out;
}

CollusionChannel strategy_theta(Strategy strategy, std::size_t c) {
  if (c < 1) throw std::invalid_argument("coalition size c must be >= 1");
  std::vector<double> theta(c + 1);
  for (std::size_t k = 1; k < c; ++k) {
    const auto twice_k = 2 * k;
    switch (strategy) {
      case Strategy::uniform: theta[k] = static_cast<double>(k) / static_cast<double>(c); break;
      case Strategy::coinflip: theta[k] = 0.5; break;
      case Strategy::majority: theta[k] = twice_k > c ? 1.0 : (twice_k < c ? 0.0 : 0.5); break;
      case Strategy::minority: theta[k] = twice_k < c ? 1.0 : (twice_k > c ? 0.0 : 0.5); break;
      case Strategy::wca:
        throw std::invalid_argument("the wca channel comes from optimize_wca, not strategy_theta");
    }
  }
  theta[0] = 0.0;
  theta[c] = 1.0;
  return CollusionChannel::stationary(std::move(theta));
}

PiratedSequence forge(const TallyVector& tally, const CollusionChannel& channel, RandomStream& rng) {
  if (tally.c != channel.c())
    throw std::invalid_argument("channel coalition size does not match the tally");
  if (!channel.is_stationary() && channel.rows() != tally.t.size())
    throw std::invalid_argument("per-position channel length does not match the tally");
  PiratedSequence out;
  out.y.resize(tally.t.size());
  for (std::size_t i = 0; i < tally.t.size(); ++i) {
    const unsigned k = tally.t[i];
    if (k > tally.c) throw std::out_of_range("tally value exceeds coalition size");
    out.y[i] = rng.bernoulli(channel.g(i, k)) ? 1 : 0;
  }
  return out;
}

}  // namespace ttrace
