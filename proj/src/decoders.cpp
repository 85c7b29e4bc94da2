#include "ttrace/decoders.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ttrace/binomial.hpp"

namespace ttrace {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_p(double p, const char* who) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error(std::string(who) + ": p outside (0,1)");
}

void check_input(const DecoderInput& in) {
  if (in.y.size() != in.xj.size() || in.y.size() != in.p.size())
    throw std::invalid_argument("decoder input lengths disagree");
}

void check_map_config(const MapConfig& cfg, std::size_t n) {
  if (cfg.c_min < 1 || cfg.c_min > cfg.c_max)
    throw std::invalid_argument("MAP config needs 1 <= c_min <= c_max");
  if (cfg.c_max >= n) throw std::invalid_argument("MAP config needs c_max < n");
}

void check_batch(const CodeMatrix& code, const BiasVector& bias, const PiratedSequence& y) {
  if (bias.size() != code.m() || y.y.size() != code.m())
    throw std::invalid_argument("code, bias and pirated sequence lengths disagree");
}

// (1-p)^e and p^e together with their complements, accurate near 0 and 1.
double pow_q(double p, double e) { return std::exp(e * std::log1p(-p)); }
double one_minus_pow_q(double p, double e) { return -std::expm1(e * std::log1p(-p)); }
double pow_p(double p, double e) { return std::exp(e * std::log(p)); }
double one_minus_pow_p(double p, double e) { return -std::expm1(e * std::log(p)); }

// The channel row checks shared by the single-user and batch informed paths.
void check_channel(const CollusionChannel& channel, unsigned c, std::size_t m) {
  if (c < 1 || channel.c() != c)
    throw std::invalid_argument("informed decoder: channel size does not match c");
  if (!channel.is_stationary() && channel.rows() != m)
    throw std::invalid_argument("informed decoder: channel rows do not match code length");
}

}  // namespace

std::string_view to_string(Decoder d) {
  switch (d) {
    case Decoder::tardos: return "tardos";
    case Decoder::informed: return "informed";
    case Decoder::map: return "map";
  }
  return "?";
}

Decoder parse_decoder(std::string_view tag) {
  for (Decoder d : {Decoder::tardos, Decoder::informed, Decoder::map})
    if (tag == to_string(d)) return d;
  throw std::invalid_argument("unknown decoder: " + std::string(tag));
}

double safe_log(double v) { return v > 0.0 ? std::max(std::log(v), kLogFloor) : kLogFloor; }

double tardos_weight(Bit y, Bit x, double p, TardosConvention conv) {
  check_p(p, "tardos_weight");
  const double u11 = std::sqrt((1.0 - p) / p);
  const double u00 = std::sqrt(p / (1.0 - p));
  if (y == x) return y ? u11 : u00;
  if (conv == TardosConvention::zero_mean) return y ? -u00 : -u11;
  return y ? -u11 : -u00;
}

double tardos_score(const DecoderInput& in, TardosConvention conv) {
  check_input(in);
  double s = 0.0;
  for (std::size_t i = 0; i < in.y.size(); ++i) s += tardos_weight(in.y[i], in.xj[i], in.p[i], conv);
  return s;
}

double guilty_symbol_lik(Bit y, Bit x, double p, unsigned c) {
  check_p(p, "guilty_symbol_lik");
  if (c < 1) throw std::invalid_argument("guilty_symbol_lik: c must be >= 1");
  const double e = static_cast<double>(c - 1);
  if (y) return 0.5 * (x ? 1.0 + pow_p(p, e) : one_minus_pow_q(p, e));
  return 0.5 * (x ? one_minus_pow_p(p, e) : 1.0 + pow_q(p, e));
}

double innocent_symbol_lik(Bit y, double p, unsigned c) {
  check_p(p, "innocent_symbol_lik");
  if (c < 1) throw std::invalid_argument("innocent_symbol_lik: c must be >= 1");
  const double e = static_cast<double>(c);
  if (y) return 0.5 * (one_minus_pow_q(p, e) + pow_p(p, e));
  return 0.5 * (one_minus_pow_p(p, e) + pow_q(p, e));
}

double brute_force_lik(Bit y, Bit x, double p, unsigned c, bool guilty) {
  auto p_y_given_t = [&](unsigned t) {
    const double p1 = t == 0 ? 0.0 : (t == c ? 1.0 : 0.5);
    return y ? p1 : 1.0 - p1;
  };
  double total = 0.0;
  if (guilty) {
    for (unsigned t = x; t <= c - 1 + x; ++t) {
      const unsigned k = t - x;
      total += choose(c - 1, k) * std::pow(p, k) * std::pow(1.0 - p, c - 1 - k) * p_y_given_t(t);
    }
  } else {
    for (unsigned t = 0; t <= c; ++t)
      total += choose(c, t) * std::pow(p, t) * std::pow(1.0 - p, c - t) * p_y_given_t(t);
  }
  return total;
}

double generalized_max(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (std::isinf(a) || std::isinf(b)) return std::max(a, b);
  return std::max(a, b) + std::log1p(std::exp(-std::abs(a - b)));
}

double generalized_max(std::span<const double> xs) {
  double acc = kNegInf;
  for (double x : xs) acc = generalized_max(acc, x);
  return acc;
}

double map_blind_score(const DecoderInput& in, const MapConfig& cfg) {
  check_input(in);
  check_map_config(cfg, in.n);
  const double n = static_cast<double>(in.n);
  double num = kNegInf, den = kNegInf;
  for (unsigned c = cfg.c_min; c <= cfg.c_max; ++c) {
    double a1 = std::log(c / n);
    double a2 = std::log((n - c) / n);
    for (std::size_t i = 0; i < in.y.size(); ++i) {
      a1 += safe_log(guilty_symbol_lik(in.y[i], in.xj[i], in.p[i], c));
      a2 += safe_log(innocent_symbol_lik(in.y[i], in.p[i], c));
    }
    num = generalized_max(num, a1);
    den = generalized_max(den, a2);
  }
  return num - den;
}

double informed_guilty_lik(Bit y, Bit x, double p, std::span<const double> g) {
  check_p(p, "informed_guilty_lik");
  const unsigned c = static_cast<unsigned>(g.size() - 1);
  const auto b = binomial_pmf(c - 1, p);
  double r = 0.0;
  for (unsigned k = 0; k < c; ++k) r += b[k] * (y ? g[k + x] : 1.0 - g[k + x]);
  return r;
}

double informed_innocent_lik(Bit y, double p, std::span<const double> g) {
  check_p(p, "informed_innocent_lik");
  const unsigned c = static_cast<unsigned>(g.size() - 1);
  const auto b = binomial_pmf(c, p);
  double r = 0.0;
  for (unsigned k = 0; k <= c; ++k) r += b[k] * (y ? g[k] : 1.0 - g[k]);
  return r;
}

double informed_score(const DecoderInput& in, const CollusionChannel& channel, unsigned c) {
  check_input(in);
  check_channel(channel, c, in.y.size());
  double s = 0.0;
  for (std::size_t i = 0; i < in.y.size(); ++i) {
    const auto g = channel.row(i);
    s += safe_log(informed_guilty_lik(in.y[i], in.xj[i], in.p[i], g)) -
         safe_log(informed_innocent_lik(in.y[i], in.p[i], g));
  }
  return s;
}

std::vector<double> tardos_scores(const CodeMatrix& code, const BiasVector& bias,
                                  const PiratedSequence& y, TardosConvention conv) {
  check_batch(code, bias, y);
  const std::size_t n = code.n();
  std::vector<double> acc(n, 0.0);
  for (std::size_t i = 0; i < code.m(); ++i) {
    const double w[2] = {tardos_weight(y.y[i], 0, bias[i], conv), tardos_weight(y.y[i], 1, bias[i], conv)};
    const auto row = code.row(i);
    for (std::size_t j = 0; j < n; ++j) acc[j] += w[row[j]];
  }
  return acc;
}

std::vector<double> map_blind_scores(const CodeMatrix& code, const BiasVector& bias,
                                     const PiratedSequence& y, const MapConfig& cfg) {
  check_batch(code, bias, y);
  check_map_config(cfg, code.n());
  const std::size_t n = code.n();
  const std::size_t sizes = cfg.c_max - cfg.c_min + 1;
  const double dn = static_cast<double>(n);

  // acc[j * sizes + s]: A1 for user j and coalition size c_min + s. The
  // innocent-side sums A2 do not depend on the user.
  std::vector<double> acc(n * sizes);
  std::vector<double> a2(sizes);
  for (std::size_t s = 0; s < sizes; ++s) {
    const double c = static_cast<double>(cfg.c_min + s);
    a2[s] = std::log((dn - c) / dn);
    for (std::size_t j = 0; j < n; ++j) acc[j * sizes + s] = std::log(c / dn);
  }

  std::vector<double> lik(2 * sizes);
  for (std::size_t i = 0; i < code.m(); ++i) {
    for (std::size_t s = 0; s < sizes; ++s) {
      const unsigned c = static_cast<unsigned>(cfg.c_min + s);
      lik[s] = safe_log(guilty_symbol_lik(y.y[i], 0, bias[i], c));
      lik[sizes + s] = safe_log(guilty_symbol_lik(y.y[i], 1, bias[i], c));
      a2[s] += safe_log(innocent_symbol_lik(y.y[i], bias[i], c));
    }
    const auto row = code.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double* src = lik.data() + row[j] * sizes;
      double* dst = acc.data() + j * sizes;
      for (std::size_t s = 0; s < sizes; ++s) dst[s] += src[s];
    }
  }

  const double den = generalized_max(a2);
  std::vector<double> scores(n);
  for (std::size_t j = 0; j < n; ++j)
    scores[j] = generalized_max(std::span<const double>(acc.data() + j * sizes, sizes)) - den;
  return scores;
}

std::vector<double> informed_scores(const CodeMatrix& code, const BiasVector& bias,
                                    const PiratedSequence& y, const CollusionChannel& channel,
                                    unsigned c) {
  check_batch(code, bias, y);
  check_channel(channel, c, code.m());
  const std::size_t n = code.n();
  std::vector<double> acc(n, 0.0);
  for (std::size_t i = 0; i < code.m(); ++i) {
    const auto g = channel.row(i);
    const double l0 = safe_log(informed_innocent_lik(y.y[i], bias[i], g));
    const double w[2] = {safe_log(informed_guilty_lik(y.y[i], 0, bias[i], g)) - l0,
                         safe_log(informed_guilty_lik(y.y[i], 1, bias[i], g)) - l0};
    const auto row = code.row(i);
    for (std::size_t j = 0; j < n; ++j) acc[j] += w[row[j]];
  }
  return acc;
}

}  // namespace ttrace
