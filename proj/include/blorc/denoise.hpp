#pragma once

#include "blorc/linalg.hpp"
#include "blorc/sign.hpp"

namespace blorc {

// ADMM settings for min_x 1/2 ||x - y||^2 + beta ||W x||_1 with splitting z = W x.
struct AdmmParams {
  double rho = 1.0;
  int max_iters = 5000;
  double primal_tol = 1e-10;
  double dual_tol = 1e-10;
  // Consecutive iterations the hard-thresholded sign pattern must stay fixed.
  int sign_stability_window = 25;
  double sign_threshold = kDefaultSignThreshold;
  // Residual balancing: every adapt_interval iterations, rho is scaled by
  // adapt_factor when one residual exceeds the other by adapt_ratio. Adaptation
  // stops after adapt_until iterations so the tail runs with a fixed rho.
  bool adaptive_rho = true;
  int adapt_interval = 10;
  int adapt_until = 2000;
  double adapt_ratio = 10.0;
  double adapt_factor = 2.0;

  void validate() const;  // throws InvalidInput
};

// Split variable and scaled dual; lets a solve resume from a nearby solution.
struct AdmmState {
  Vector z;
  Vector u;
  double rho = 0.0;  // penalty u is scaled by; 0 means "use params.rho"
};

struct DenoiseResult {
  Vector x_star;
  int iterations_used = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  SignPattern sign_pattern;
  AdmmState state;
};

// Throws InvalidInput on bad dimensions / non-finite data / beta <= 0, and
// ConvergenceError when max_iters passes before both residuals are below
// tolerance and the sign pattern has been stable for the whole window.
DenoiseResult admm_denoise(const Matrix& w, const Vector& y, double beta, const AdmmParams& params,
                           const AdmmState* warm_start = nullptr);

// 1/2 ||x - y||^2 + beta ||W x||_1
double denoise_objective(const Matrix& w, const Vector& y, double beta, const Vector& x);

double soft_threshold(double v, double t);
Vector soft_threshold(const Vector& v, double t);

// W^T S_lambda(W y) for orthogonal W. Throws InvalidInput when
// ||W W^T - I||_F > 1e-8 or lambda < 0.
Vector orthogonal_closed_form(const Matrix& w, const Vector& y, double lambda);

// argmin_x 1/2 (x - y)^2 + |w x|
double scalar_denoise(double w, double y);

// Distance from 0 to x - y + beta W^T d||W x||_1. Rows with |[W x]_i| < gamma are
// treated as zero rows whose subgradient coefficients range over [-1, 1]; the
// best coefficients come from a box-constrained least-squares fit, so the value
// is an upper bound that is tight at a converged fit.
double optimality_residual(const Matrix& w, const Vector& y, double beta, const Vector& x,
                           double gamma = kDefaultSignThreshold);

}  // namespace blorc
