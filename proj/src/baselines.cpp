#include "blorc/baselines.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "blorc/errors.hpp"
#include "blorc/rng.hpp"
#include "blorc/train.hpp"

namespace blorc {

Matrix finite_difference_matrix(Eigen::Index n) {
  if (n < 2) throw InvalidInput("finite_difference_matrix: n must be >= 2");
  Matrix d = Matrix::Zero(n - 1, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    d(i, i) = -1.0;
    d(i, i + 1) = 1.0;
  }
  return d;
}

Matrix dct_matrix(Eigen::Index n) {
  if (n < 1) throw InvalidInput("dct_matrix: n must be >= 1");
  Matrix c(n, n);
  const double nn = static_cast<double>(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double scale = k == 0 ? std::sqrt(1.0 / nn) : std::sqrt(2.0 / nn);
    for (Eigen::Index j = 0; j < n; ++j)
      c(k, j) = scale * std::cos(std::numbers::pi * (static_cast<double>(j) + 0.5) * static_cast<double>(k) / nn);
  }
  return c;
}

void GoldenSectionSpec::validate() const {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) throw InvalidInput("golden section: need lo < hi");
  if (!(tol > 0.0)) throw InvalidInput("golden section: tol must be positive");
  if (max_evals < 2) throw InvalidInput("golden section: max_evals must be >= 2");
}

GoldenSectionResult golden_section_minimize(const std::function<double(double)>& f,
                                            const GoldenSectionSpec& spec) {
  spec.validate();
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  GoldenSectionResult best;
  best.fx = std::numeric_limits<double>::infinity();
  auto eval = [&](double x) {
    const double fx = f(x);
    ++best.evals;
    if (fx < best.fx || best.evals == 1) {
      best.x = x;
      best.fx = fx;
    }
    return fx;
  };

  double a = spec.lo;
  double b = spec.hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  while (b - a >= spec.tol && best.evals < spec.max_evals) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = eval(d);
    }
  }
  best.bracket_lo = a;
  best.bracket_hi = b;
  return best;
}

GoldenSectionResult golden_section_lambda(const Matrix& w, const std::vector<TrainingPair>& val_pairs,
                                          const GoldenSectionSpec& spec, const AdmmParams& params) {
  if (val_pairs.empty()) throw InvalidInput("golden_section_lambda: no validation pairs");
  return golden_section_minimize([&](double lambda) { return evaluate_loss(lambda * w, val_pairs, params); },
                                 spec);
}

double sparsity_objective(const Matrix& w, const Matrix& signals) { return (w * signals).cwiseAbs().sum(); }

UnsupervisedResult unsupervised_orthogonal_learn(const std::vector<Vector>& clean_signals,
                                                 const UnsupervisedParams& params, std::uint64_t seed) {
  if (clean_signals.empty()) throw InvalidInput("unsupervised_orthogonal_learn: no signals");
  if (params.iters < 0 || !(params.rho > 0.0) || !(params.lambda >= 0.0))
    throw InvalidInput("unsupervised_orthogonal_learn: invalid parameters");
  const Eigen::Index n = clean_signals.front().size();
  const auto t = static_cast<Eigen::Index>(clean_signals.size());
  Matrix x(n, t);
  for (Eigen::Index j = 0; j < t; ++j) {
    if (clean_signals[static_cast<std::size_t>(j)].size() != n)
      throw InvalidInput("unsupervised_orthogonal_learn: signals differ in length");
    x.col(j) = clean_signals[static_cast<std::size_t>(j)];
  }

  UnsupervisedResult out;
  if (params.random_init) {
    auto gen = make_rng(seed, RngPurpose::kInit);
    std::normal_distribution<double> dist(0.0, 1.0);
    Matrix g(n, n);
    for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = dist(gen);
    Eigen::JacobiSVD<Matrix> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.w = svd.matrixU() * svd.matrixV().transpose();
  } else {
    out.w = Matrix::Identity(n, n);
  }
  out.objective.push_back(sparsity_objective(out.w, x));

  const double thresh = params.lambda / params.rho;
  Matrix u = Matrix::Zero(n, t);
  Matrix z(n, t);
  for (int it = 0; it < params.iters; ++it) {
    const Matrix wx = out.w * x;
    z = (wx + u).unaryExpr([thresh](double v) { return soft_threshold(v, thresh); });
    // argmin over orthogonal W of ||W X - (Z - U)||_F
    const Matrix m = (z - u) * x.transpose();
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.w = svd.matrixU() * svd.matrixV().transpose();
    u += out.w * x - z;
    out.objective.push_back(sparsity_objective(out.w, x));
  }
  return out;
}

}  // namespace blorc
