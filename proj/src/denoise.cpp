#include "blorc/denoise.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "blorc/errors.hpp"

namespace blorc {

void AdmmParams::validate() const {
  if (!(rho > 0.0)) throw InvalidInput("admm: rho must be positive");
  if (max_iters < 1) throw InvalidInput("admm: max_iters must be >= 1");
  if (!(primal_tol > 0.0) || !(dual_tol > 0.0)) throw InvalidInput("admm: tolerances must be positive");
  if (sign_stability_window < 1) throw InvalidInput("admm: sign_stability_window must be >= 1");
  if (adaptive_rho && (adapt_interval < 1 || !(adapt_ratio > 1.0) || !(adapt_factor > 1.0)))
    throw InvalidInput("admm: invalid rho adaptation settings");
  if (!(sign_threshold > 0.0)) throw InvalidInput("admm: sign_threshold must be positive");
}

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

Vector soft_threshold(const Vector& v, double t) {
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = soft_threshold(v(i), t);
  return out;
}

double denoise_objective(const Matrix& w, const Vector& y, double beta, const Vector& x) {
  return 0.5 * (x - y).squaredNorm() + beta * (w * x).lpNorm<1>();
}

namespace {

bool same_pattern(const Vector& v, double gamma, const std::vector<std::int8_t>& prev) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    const std::int8_t s = mag >= gamma ? (v(i) > 0 ? 1 : -1) : 0;
    if (s != prev[static_cast<std::size_t>(i)]) return false;
  }
  return true;
}

}  // namespace

DenoiseResult admm_denoise(const Matrix& w, const Vector& y, double beta, const AdmmParams& params,
                           const AdmmState* warm_start) {
  params.validate();
  if (w.cols() != y.size()) throw InvalidInput("admm_denoise: W columns must match y length");
  if (!(beta > 0.0)) throw InvalidInput("admm_denoise: beta must be positive");
  if (!all_finite(w) || !all_finite(y)) throw InvalidInput("admm_denoise: non-finite input");

  const Eigen::Index n = w.cols();
  const Eigen::Index k = w.rows();
  const double gamma = params.sign_threshold;

  DenoiseResult res;
  if (k == 0) {
    res.x_star = y;
    res.sign_pattern = sign_pattern_of(Vector(0), gamma);
    res.state = {Vector(0), Vector(0), params.rho};
    return res;
  }

  // x-update: (I + rho W^T W) x = y + rho W^T (z - u), by Cholesky. The system
  // is SPD with eigenvalues >= 1; it is refactored only when rho changes.
  const Matrix gram = w.transpose() * w;
  const Matrix wt = w.transpose();
  Eigen::LLT<Matrix> chol;
  double rho = params.rho;
  auto factor = [&] {
    Matrix sys = rho * gram;
    sys.diagonal().array() += 1.0;
    chol.compute(sys);
  };

  Vector z = Vector::Zero(k);
  Vector u = Vector::Zero(k);
  if (warm_start != nullptr && warm_start->z.size() == k && warm_start->u.size() == k) {
    z = warm_start->z;
    u = warm_start->u;
    if (warm_start->rho > 0.0) rho = warm_start->rho;
  }
  factor();

  Vector x(n), rhs(n), v(k), z_old(k), dz(k);
  std::vector<std::int8_t> pattern(static_cast<std::size_t>(k), 2);  // 2: no pattern yet
  int stable = 0;
  double r_norm = 0.0, s_norm = 0.0;

  for (int it = 1; it <= params.max_iters; ++it) {
    rhs = y;
    rhs.noalias() += rho * (wt * (z - u));
    x = chol.solve(rhs);
    v.noalias() = w * x;

    z_old = z;
    const double shrink = beta / rho;
    for (Eigen::Index i = 0; i < k; ++i) z(i) = soft_threshold(v(i) + u(i), shrink);
    u += v - z;

    r_norm = (v - z).norm();
    dz = z - z_old;
    s_norm = rho * (wt * dz).norm();

    if (same_pattern(v, gamma, pattern)) {
      ++stable;
    } else {
      stable = 0;
      for (Eigen::Index i = 0; i < k; ++i) {
        const double mag = std::abs(v(i));
        pattern[static_cast<std::size_t>(i)] = mag >= gamma ? (v(i) > 0 ? 1 : -1) : 0;
      }
    }

    if (r_norm <= params.primal_tol && s_norm <= params.dual_tol &&
        stable >= params.sign_stability_window) {
      res.x_star = x;
      res.iterations_used = it;
      res.primal_residual = r_norm;
      res.dual_residual = s_norm;
      res.sign_pattern = sign_pattern_of(v, gamma);
      res.state = {std::move(z), std::move(u), rho};
      return res;
    }

    if (params.adaptive_rho && it <= params.adapt_until && it % params.adapt_interval == 0) {
      double scale = 1.0;
      if (r_norm > params.adapt_ratio * s_norm)
        scale = params.adapt_factor;
      else if (s_norm > params.adapt_ratio * r_norm)
        scale = 1.0 / params.adapt_factor;
      if (scale != 1.0) {
        rho *= scale;
        u /= scale;  // scaled dual is y / rho
        factor();
      }
    }
  }
  throw ConvergenceError("admm_denoise: no convergence after " + std::to_string(params.max_iters) +
                             " iterations (primal " + std::to_string(r_norm) + ", dual " +
                             std::to_string(s_norm) + ")",
                         params.max_iters, r_norm, s_norm);
}

Vector orthogonal_closed_form(const Matrix& w, const Vector& y, double lambda) {
  if (w.rows() != w.cols() || w.cols() != y.size())
    throw InvalidInput("orthogonal_closed_form: W must be square and match y");
  if (!(lambda >= 0.0)) throw InvalidInput("orthogonal_closed_form: lambda must be >= 0");
  const Matrix gram = w * w.transpose();
  if ((gram - Matrix::Identity(w.rows(), w.rows())).norm() > 1e-8)
    throw InvalidInput("orthogonal_closed_form: W is not orthogonal");
  // S_0 is the identity and W^T W = I, so skip the round trip.
  if (lambda == 0.0) return y;
  return w.transpose() * soft_threshold(Vector(w * y), lambda);
}

double scalar_denoise(double w, double y) {
  const double aw = std::abs(w);
  if (y >= 0.0) return y - aw >= 0.0 ? y - aw : 0.0;
  return y + aw <= 0.0 ? y + aw : 0.0;
}

double optimality_residual(const Matrix& w, const Vector& y, double beta, const Vector& x,
                           double gamma) {
  if (w.cols() != x.size() || x.size() != y.size())
    throw InvalidInput("optimality_residual: dimension mismatch");
  const Vector wx = w * x;
  Vector r = x - y;
  std::vector<Eigen::Index> zero_rows;
  for (Eigen::Index i = 0; i < wx.size(); ++i) {
    if (std::abs(wx(i)) >= gamma)
      r += beta * (wx(i) > 0 ? 1.0 : -1.0) * w.row(i).transpose();
    else
      zero_rows.push_back(i);
  }
  if (zero_rows.empty()) return r.norm();

  const auto k0 = static_cast<Eigen::Index>(zero_rows.size());
  Matrix b(x.size(), k0);
  for (Eigen::Index j = 0; j < k0; ++j) b.col(j) = beta * w.row(zero_rows[static_cast<std::size_t>(j)]).transpose();

  // Minimize ||r + B c|| over the box |c_j| <= 1: start at the clipped
  // least-squares solution, then refine with projected coordinate descent.
  Vector c = (-(pseudoinverse(b) * r)).cwiseMax(-1.0).cwiseMin(1.0);
  Vector res = r + b * c;
  const Vector col_sq = b.colwise().squaredNorm();
  for (int sweep = 0; sweep < 5000; ++sweep) {
    double moved = 0.0;
    for (Eigen::Index j = 0; j < k0; ++j) {
      if (col_sq(j) == 0.0) continue;
      const double cj = std::clamp(c(j) - b.col(j).dot(res) / col_sq(j), -1.0, 1.0);
      const double d = cj - c(j);
      if (d != 0.0) {
        res += d * b.col(j);
        c(j) = cj;
        moved = std::max(moved, std::abs(d));
      }
    }
    if (moved < 1e-15) break;
  }
  return res.norm();
}

}  // namespace blorc
