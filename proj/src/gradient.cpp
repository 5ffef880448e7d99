#include "blorc/gradient.hpp"

#include <chrono>

#include "blorc/errors.hpp"
#include "blorc/parallel.hpp"

namespace blorc {

Matrix grad_wpm(const Vector& grad_x, const Vector& s, const Matrix& projector, double beta) {
  if (projector.rows() != grad_x.size() || projector.cols() != grad_x.size())
    throw InvalidInput("grad_wpm: projector must be n x n");
  const Vector pg = projector * grad_x;
  return -beta * s * pg.transpose();
}

Matrix grad_wzero(const Vector& grad_x, const Vector& q, const Matrix& projector, const Matrix& w0_pinv) {
  const Eigen::Index n = grad_x.size();
  if (q.size() != n || projector.rows() != n || projector.cols() != n || w0_pinv.rows() != n)
    throw InvalidInput("grad_wzero: dimension mismatch");
  if (w0_pinv.cols() == 0) return Matrix(0, n);
  // P (q g^T + g q^T) W0^+ = (P q)(W0^+^T g)^T + (P g)(W0^+^T q)^T
  const Vector pq = projector * q;
  const Vector pg = projector * grad_x;
  const Vector ag = w0_pinv.transpose() * grad_x;
  const Vector aq = w0_pinv.transpose() * q;
  return -(ag * pq.transpose() + aq * pg.transpose());
}

SampleGradient sample_gradient(const Matrix& w, const TrainingPair& pair, double gamma,
                               const AdmmParams& params, double beta, std::optional<double> rel_tol) {
  if (w.cols() != pair.y_noisy.size() || pair.x_clean.size() != pair.y_noisy.size())
    throw InvalidInput("sample_gradient: W columns must match the signal length");
  AdmmParams p = params;
  p.sign_threshold = gamma;
  DenoiseResult solve = admm_denoise(w, pair.y_noisy, beta, p);

  SampleGradient out;
  out.x_star = std::move(solve.x_star);
  const Vector transformed = w * out.x_star;
  out.sign_pattern = sign_pattern_of(transformed, gamma);
  out.threshold_margin = threshold_margin(transformed, gamma);
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    const bool thresholded_zero = out.sign_pattern.values[static_cast<std::size_t>(i)] == 0;
    if (thresholded_zero != (solve.state.z(i) == 0.0)) ++out.misclassified_rows;
  }

  const Vector grad_x = out.x_star - pair.x_clean;
  out.loss = 0.5 * grad_x.squaredNorm();

  const RowSplit split = row_split(w, out.sign_pattern);
  const PinvProjector pp = pinv_and_projector(split.w0, rel_tol);
  out.w0_rank = pp.rank.rank;

  Vector q = pair.y_noisy;
  if (split.wpm.rows() > 0) q.noalias() -= beta * split.wpm.transpose() * split.s;

  const Matrix g_pm = grad_wpm(grad_x, split.s, pp.projector, beta);
  const Matrix g_0 = grad_wzero(grad_x, q, pp.projector, pp.pinv);

  out.grad_w.resize(w.rows(), w.cols());
  for (std::size_t r = 0; r < split.zero_rows.size(); ++r)
    out.grad_w.row(split.zero_rows[r]) = g_0.row(static_cast<Eigen::Index>(r));
  for (std::size_t r = 0; r < split.nonzero_rows.size(); ++r)
    out.grad_w.row(split.nonzero_rows[r]) = g_pm.row(static_cast<Eigen::Index>(r));
  return out;
}

double sample_loss(const Matrix& w, const TrainingPair& pair, const AdmmParams& params, double beta,
                   const AdmmState* warm_start) {
  const DenoiseResult r = admm_denoise(w, pair.y_noisy, beta, params, warm_start);
  return 0.5 * (r.x_star - pair.x_clean).squaredNorm();
}

AdmmParams fd_admm_params() {
  AdmmParams p;
  p.primal_tol = 1e-14;
  p.dual_tol = 1e-14;
  p.max_iters = 100000;
  return p;
}

Matrix fd_gradient(const Matrix& w, const TrainingPair& pair, double step, const AdmmParams& params,
                   double beta) {
  if (!(step > 0.0)) throw InvalidInput("fd_gradient: step must be positive");
  if (w.cols() != pair.y_noisy.size()) throw InvalidInput("fd_gradient: W columns must match the signal length");
  const DenoiseResult base = admm_denoise(w, pair.y_noisy, beta, params);
  AdmmParams p = params;
  p.adaptive_rho = false;  // keep the warm-start penalty fixed

  const Eigen::Index k = w.rows();
  const Eigen::Index n = w.cols();
  Matrix grad(k, n);
  parallel_for(static_cast<std::size_t>(k * n), [&](std::size_t idx) {
    const auto i = static_cast<Eigen::Index>(idx) / n;
    const auto j = static_cast<Eigen::Index>(idx) % n;
    Matrix wp = w;
    wp(i, j) += step;
    const double up = sample_loss(wp, pair, p, beta, &base.state);
    wp(i, j) = w(i, j) - step;
    const double down = sample_loss(wp, pair, p, beta, &base.state);
    grad(i, j) = (up - down) / (2.0 * step);
  });
  return grad;
}

GradientCheck gradient_check(const Matrix& w, const TrainingPair& pair, double gamma, double step,
                             const AdmmParams& params, const AdmmParams& fd_params,
                             std::optional<double> band_width) {
  using clock = std::chrono::steady_clock;
  GradientCheck out;
  const auto t0 = clock::now();
  const SampleGradient g = sample_gradient(w, pair, gamma, params);
  const auto t1 = clock::now();
  const Matrix fd = fd_gradient(w, pair, step, fd_params);
  const auto t2 = clock::now();
  out.analytic_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  out.fd_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
  out.max_abs_err = (g.grad_w - fd).cwiseAbs().maxCoeff();
  out.threshold_margin = g.threshold_margin;
  out.misclassified_rows = g.misclassified_rows;
  out.in_boundary_band = g.threshold_margin < band_width.value_or(10.0 * step);
  return out;
}

}  // namespace blorc
