#include "ttrace/wca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "ttrace/binomial.hpp"

namespace ttrace {

namespace {

// Channel at one node with both outcomes kept explicitly: forming 1 - a
// cancels catastrophically when p is close to 0 or 1.
struct NodeChannel {
  double a0, a1;          // P(Y=1 | X=x)
  double b0, b1;          // P(Y=0 | X=x)
  double q1, q0;          // P(Y=1), P(Y=0)
};

NodeChannel node_channel(std::span<const double> theta, double p, const std::vector<double>& b) {
  NodeChannel ch{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  for (std::size_t k = 0; k < b.size(); ++k) {
    ch.a0 += b[k] * theta[k];
    ch.a1 += b[k] * theta[k + 1];
    ch.b0 += b[k] * (1.0 - theta[k]);
    ch.b1 += b[k] * (1.0 - theta[k + 1]);
  }
  ch.q1 = p * ch.a1 + (1.0 - p) * ch.a0;
  ch.q0 = p * ch.b1 + (1.0 - p) * ch.b0;
  return ch;
}

// a ln(a/q) + b ln(b/r), with 0 ln 0 = 0.
double kl_term(double a, double q, double b, double r) {
  double v = 0.0;
  if (a > 0.0) v += a * std::log(a / q);
  if (b > 0.0) v += b * std::log(b / r);
  return v;
}

// Per-node binomial rows B(k; c-1, p_q), cached for one (c, quadrature).
struct NodeTable {
  NodeTable(std::size_t c, const Quadrature& quad) : c(c) {
    rows.reserve(quad.nodes.size());
    for (double p : quad.nodes) rows.push_back(binomial_pmf(static_cast<unsigned>(c - 1), p));
  }
  std::size_t c;
  std::vector<std::vector<double>> rows;
};

double objective(std::span<const double> theta, const Quadrature& quad, const NodeTable& table) {
  double total = 0.0;
  for (std::size_t q = 0; q < quad.nodes.size(); ++q) {
    const double p = quad.nodes[q];
    const auto ch = node_channel(theta, p, table.rows[q]);
    total += quad.weights[q] *
             (p * kl_term(ch.a1, ch.q1, ch.b1, ch.q0) + (1.0 - p) * kl_term(ch.a0, ch.q1, ch.b0, ch.q0));
  }
  return total;
}

// dI/dtheta_k. Uses dI/da_x = P(X=x) (logit a_x - logit q); the terms through
// q cancel because the output marginal sums to one.
double partial(std::span<const double> theta, std::size_t k, const Quadrature& quad,
               const NodeTable& table) {
  const std::size_t c = table.c;
  double d = 0.0;
  for (std::size_t q = 0; q < quad.nodes.size(); ++q) {
    const double p = quad.nodes[q];
    const auto& b = table.rows[q];
    const auto ch = node_channel(theta, p, b);
    const double lq = std::log(ch.q1) - std::log(ch.q0);
    double term = 0.0;
    if (k >= 1) term += p * (std::log(ch.a1) - std::log(ch.b1) - lq) * b[k - 1];
    if (k <= c - 1) term += (1.0 - p) * (std::log(ch.a0) - std::log(ch.b0) - lq) * b[k];
    if (!std::isnan(term)) d += quad.weights[q] * term;
  }
  return d;
}

}  // namespace

ThetaVector::ThetaVector(std::vector<double> theta) : theta_(std::move(theta)) {
  // Reuses the channel validation (size, range, marking).
  (void)CollusionChannel::stationary(theta_);
}

ThetaVector ThetaVector::unchecked(std::vector<double> theta) {
  ThetaVector t;
  t.theta_ = std::move(theta);
  return t;
}

Quadrature gauss_chebyshev(std::size_t nodes) {
  if (nodes == 0) throw std::invalid_argument("quadrature needs at least one node");
  Quadrature quad;
  quad.nodes.resize(nodes);
  quad.weights.assign(nodes, 1.0 / static_cast<double>(nodes));
  for (std::size_t q = 0; q < nodes; ++q) {
    const double angle = static_cast<double>(2 * q + 1) * std::numbers::pi / static_cast<double>(4 * nodes);
    const double cs = std::cos(angle);
    quad.nodes[q] = cs * cs;
  }
  return quad;
}

double conditional_y_given_x(const ThetaVector& theta, double p, Bit x) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("conditional_y_given_x: p outside (0,1)");
  const std::size_t c = theta.c();
  const auto b = binomial_pmf(static_cast<unsigned>(c - 1), p);
  double r = 0.0;
  for (std::size_t k = 0; k < c; ++k) r += b[k] * theta[k + x];
  return r;
}

double mutual_information(const ThetaVector& theta, const Quadrature& quad) {
  return objective(theta.values(), quad, NodeTable(theta.c(), quad));
}

std::vector<double> mutual_information_gradient(const ThetaVector& theta, const Quadrature& quad) {
  const NodeTable table(theta.c(), quad);
  std::vector<double> g(theta.c() + 1);
  for (std::size_t k = 0; k <= theta.c(); ++k) g[k] = partial(theta.values(), k, quad, table);
  return g;
}

WcaResult optimize_wca(std::size_t c, const Quadrature& quad, const WcaOptions& opts) {
  if (c < 2) throw std::invalid_argument("optimize_wca needs c >= 2 (c = 1 has no free parameters)");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("optimize_wca needs tol > 0");

  const NodeTable table(c, quad);
  std::vector<double> theta(c + 1);
  for (std::size_t k = 0; k <= c; ++k) theta[k] = static_cast<double>(k) / static_cast<double>(c);

  // Coordinates are settled once a full sweep moves none of them by more
  // than step_tol; this is much tighter than tol on the objective.
  const double step_tol = opts.tol * 1e-3;
  WcaResult result{ThetaVector::unchecked({}), 0.0, 0, false};
  for (std::size_t sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    double max_step = 0.0;
    for (std::size_t k = 1; k < c; ++k) {
      const double old = theta[k];
      auto slope_at = [&](double v) {
        theta[k] = v;
        return partial(theta, k, quad, table);
      };
      double next;
      if (slope_at(0.0) >= 0.0) {
        next = 0.0;
      } else if (slope_at(1.0) <= 0.0) {
        next = 1.0;
      } else {
        double lo = 0.0, hi = 1.0;
        while (hi - lo > 1e-15) {
          const double mid = 0.5 * (lo + hi);
          (slope_at(mid) > 0.0 ? hi : lo) = mid;
        }
        next = 0.5 * (lo + hi);
      }
      theta[k] = next;
      max_step = std::max(max_step, std::abs(next - old));
    }
    result.sweeps = sweep;
    if (max_step <= step_tol) {
      result.converged = true;
      break;
    }
  }
  result.mutual_information = objective(theta, quad, table);
  result.theta = ThetaVector(std::move(theta));
  return result;
}

}  // namespace ttrace
