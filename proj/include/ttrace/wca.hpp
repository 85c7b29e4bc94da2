#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ttrace/collusion.hpp"

namespace ttrace {

/// Stationary channel parameters theta_0..theta_c with theta_0 = 0 and
/// theta_c = 1.
class ThetaVector {
 public:
  explicit ThetaVector(std::vector<double> theta);
  /// No marking or range checks; for test fixtures only.
  static ThetaVector unchecked(std::vector<double> theta);

  std::size_t c() const noexcept { return theta_.size() - 1; }
  double operator[](std::size_t k) const { return theta_[k]; }
  std::span<const double> values() const noexcept { return theta_; }
  CollusionChannel channel() const { return CollusionChannel::stationary(theta_); }

 private:
  ThetaVector() = default;
  std::vector<double> theta_;
};

/// Rule for averaging over the arcsine bias law: E[f(P)] ~ sum_q w_q f(p_q).
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Chebyshev (first kind) rule mapped to (0,1). Its weight function is
/// exactly the arcsine density, so the rule has uniform weights 1/N and nodes
/// p_q = cos^2((2q-1) pi / 4N).
Quadrature gauss_chebyshev(std::size_t nodes);

/// P(Y=1 | X=x, p): the other c-1 colluders' tally is Binomial(c-1, p),
/// shifted by the colluder's own bit x and pushed through theta.
double conditional_y_given_x(const ThetaVector& theta, double p, Bit x);

/// Bias-averaged I(X;Y | P) in nats between one colluder's bit and the
/// pirated bit.
double mutual_information(const ThetaVector& theta, const Quadrature& quad);

/// d/dtheta_k of mutual_information for every k (entries 0 and c included).
std::vector<double> mutual_information_gradient(const ThetaVector& theta, const Quadrature& quad);

struct WcaOptions {
  double tol = 1e-8;
  std::size_t max_sweeps = 20000;
};

struct WcaResult {
  ThetaVector theta;
  double mutual_information = 0.0;
  std::size_t sweeps = 0;
  /// False when max_sweeps ran out; theta is then the best iterate found.
  bool converged = false;
};

/// Worst-case stationary attack: minimizes mutual_information over the
/// interior theta_1..theta_{c-1} in [0,1]. Projected coordinate descent from
/// theta_k = k/c; each 1-D subproblem is convex and solved by bisection on
/// the sign of the analytic partial derivative.
WcaResult optimize_wca(std::size_t c, const Quadrature& quad, const WcaOptions& opts = {});

}  // namespace ttrace
