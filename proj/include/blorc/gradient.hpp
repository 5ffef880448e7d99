#pragma once

#include <optional>

#include "blorc/closed_form.hpp"
#include "blorc/data.hpp"
#include "blorc/denoise.hpp"
#include "blorc/linalg.hpp"

namespace blorc {

// Gradient of Q = 1/2 ||x*(W, y) - x_clean||^2 for one training pair.
struct SampleGradient {
  Matrix grad_w;  // k x n, rows aligned with the rows of W
  double loss = 0.0;
  SignPattern sign_pattern;
  Vector x_star;
  // min_i | |[W x*]_i| - gamma |: how close the split came to flipping a row.
  double threshold_margin = 0.0;
  Eigen::Index w0_rank = 0;  // numerical rank of W0 used for the pseudoinverse
  // Rows where the gamma threshold disagrees with the solver's exact zero set
  // (soft-thresholded split variable). Nonzero means the split, and therefore
  // the gradient, describes a different local closed form.
  std::size_t misclassified_rows = 0;

  bool w0_full_row_rank() const { return w0_rank == static_cast<Eigen::Index>(sign_pattern.zero_count()); }
};

// -beta * s * (P grad_x)^T  (k_pm x n)
Matrix grad_wpm(const Vector& grad_x, const Vector& s, const Matrix& projector, double beta);

// -(P (q grad_x^T + grad_x q^T) W0^+)^T  (k0 x n), with q = y - beta Wpm^T s.
Matrix grad_wzero(const Vector& grad_x, const Vector& q, const Matrix& projector, const Matrix& w0_pinv);

// Solves the lower level, splits W by the sign pattern at threshold gamma and
// scatters both gradient blocks back to the original row positions.
// Propagates ConvergenceError.
SampleGradient sample_gradient(const Matrix& w, const TrainingPair& pair, double gamma,
                               const AdmmParams& params, double beta = 1.0,
                               std::optional<double> rel_tol = std::nullopt);

// 1/2 ||x*(W, y) - x_clean||^2 from a fresh ADMM solve.
double sample_loss(const Matrix& w, const TrainingPair& pair, const AdmmParams& params,
                   double beta = 1.0, const AdmmState* warm_start = nullptr);

// Central differences (Q(W + h E_ij) - Q(W - h E_ij)) / (2h) over every entry.
// Each perturbed problem is re-solved by ADMM, warm-started from the
// unperturbed split/dual state. Entries are evaluated in parallel.
Matrix fd_gradient(const Matrix& w, const TrainingPair& pair, double step, const AdmmParams& params,
                   double beta = 1.0);

// Tight settings suitable for finite-difference loss evaluations.
AdmmParams fd_admm_params();

struct GradientCheck {
  double max_abs_err = 0.0;  // max |analytic - central difference|
  double analytic_ms = 0.0;
  double fd_ms = 0.0;
  double threshold_margin = 0.0;
  std::size_t misclassified_rows = 0;
  // Some |[W x*]_i| lies within band_width of gamma, so a perturbation of the
  // finite-difference size may flip the split.
  bool in_boundary_band = false;

  bool sign_boundary() const { return in_boundary_band || misclassified_rows > 0; }
};

// Analytic gradient (params, threshold gamma) against central differences
// with the given step (fd_params for the perturbed solves). band_width
// defaults to 10 * step.
GradientCheck gradient_check(const Matrix& w, const TrainingPair& pair, double gamma, double step,
                             const AdmmParams& params, const AdmmParams& fd_params,
                             std::optional<double> band_width = std::nullopt);

}  // namespace blorc
