#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "ttrace/codegen.hpp"
#include "ttrace/collusion.hpp"

namespace ttrace {

/// Everything a simple decoder sees for one user: the pirated sequence y,
/// the user's codeword x_j, the secret biases p and the number of users n.
struct DecoderInput {
  std::span<const Bit> y;
  std::span<const Bit> xj;
  std::span<const double> p;
  std::size_t n = 0;
};

/// Range of coalition sizes summed by the MAP-blind decoder. A uniform prior
/// over sizes cancels in the odds ratio.
struct MapConfig {
  unsigned c_max = 10;
  unsigned c_min = 2;
};

enum class Decoder { tardos, informed, map };

std::string_view to_string(Decoder d);
Decoder parse_decoder(std::string_view tag);

/// Tardos weight cross-assignment.
/// zero_mean: U(1,0) = -U(0,0), U(0,1) = -U(1,1). Innocent scores have zero
///   mean and unit variance per position.
/// literal: U(1,0) = -U(1,1), U(0,1) = -U(0,0).
enum class TardosConvention { zero_mean, literal };

/// Per-symbol log probabilities that are exactly zero are replaced by this
/// value so that sums stay finite.
inline constexpr double kLogFloor = -745.0;

double safe_log(double v);

/// Symmetric Tardos weight U(y, x, p). Throws std::domain_error unless
/// 0 < p < 1.
double tardos_weight(Bit y, Bit x, double p, TardosConvention conv = TardosConvention::zero_mean);
double tardos_score(const DecoderInput& in, TardosConvention conv = TardosConvention::zero_mean);

/// P(y | s_j = 1, x, p, c) with every interior channel parameter integrated
/// against a symmetric Beta prior (so P(y | t interior) = 1/2).
double guilty_symbol_lik(Bit y, Bit x, double p, unsigned c);
/// P(y | s_j = 0, p, c); independent of the user's own bit.
double innocent_symbol_lik(Bit y, double p, unsigned c);

/// Explicit sum over tallies of P(y|t) P(t|s_j, x, c) with P(y|t) = 0, 1/2, 1
/// for t = 0, interior, c. Reference for the two closed forms above; x is
/// ignored when guilty is false.
double brute_force_lik(Bit y, Bit x, double p, unsigned c, bool guilty);

/// log(exp(a) + exp(b)) without overflow; -inf is the identity.
double generalized_max(double a, double b);
/// Left fold of generalized_max over xs; -inf for an empty list.
double generalized_max(std::span<const double> xs);

/// Log posterior odds of guilt for one user, summed over c in
/// [c_min, c_max] with P(s_j=1|c) = c/n.
double map_blind_score(const DecoderInput& in, const MapConfig& cfg);

/// P(y | s_j = 1, x, p) and P(y | s_j = 0, p) for a known channel row.
double informed_guilty_lik(Bit y, Bit x, double p, std::span<const double> g);
double informed_innocent_lik(Bit y, double p, std::span<const double> g);

/// Neyman-Pearson log-likelihood ratio under the true channel and size c.
double informed_score(const DecoderInput& in, const CollusionChannel& channel, unsigned c);

// Batch versions score every user of a code at once. They share per-position
// tables across users and accumulate in the same order as the single-user
// functions, so the results are identical.
std::vector<double> tardos_scores(const CodeMatrix& code, const BiasVector& bias,
                                  const PiratedSequence& y,
                                  TardosConvention conv = TardosConvention::zero_mean);
std::vector<double> map_blind_scores(const CodeMatrix& code, const BiasVector& bias,
                                     const PiratedSequence& y, const MapConfig& cfg);
std::vector<double> informed_scores(const CodeMatrix& code, const BiasVector& bias,
                                    const PiratedSequence& y, const CollusionChannel& channel,
                                    unsigned c);

}  // namespace ttrace
