#include "blorc/linalg.hpp"

#include <algorithm>
#include <limits>

#include "blorc/errors.hpp"

namespace blorc {

bool all_finite(const Matrix& a) { return a.size() == 0 || a.allFinite(); }

double default_rel_tol(const Matrix& a) {
  const auto dim = std::max<Eigen::Index>({a.rows(), a.cols(), 1});
  return static_cast<double>(dim) * std::numeric_limits<double>::epsilon();
}

SvdFactors truncated_svd(const Matrix& a, std::optional<double> rel_tol) {
  if (!all_finite(a)) throw InvalidInput("truncated_svd: matrix has non-finite entries");
  const double rtol = rel_tol.value_or(default_rel_tol(a));
  if (!(rtol > 0.0 && rtol < 1.0)) throw InvalidInput("truncated_svd: rel_tol must lie in (0, 1)");

  SvdFactors out;
  if (a.rows() == 0 || a.cols() == 0) {
    out.u = Matrix(a.rows(), 0);
    out.s = Vector(0);
    out.v = Matrix(a.cols(), 0);
    out.rank.singular_values = Vector(0);
    return out;
  }

  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double cutoff = rtol * sv(0);
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > cutoff) ++r;

  out.rank.singular_values = sv;
  out.rank.tolerance = cutoff;
  out.rank.rank = r;
  out.u = svd.matrixU().leftCols(r);
  out.s = sv.head(r);
  out.v = svd.matrixV().leftCols(r);
  return out;
}

RankDecision rank_decision(const Matrix& a, std::optional<double> rel_tol) {
  return truncated_svd(a, rel_tol).rank;
}

namespace {

Matrix pinv_from(const SvdFactors& f) {
  return f.v * f.s.cwiseInverse().asDiagonal() * f.u.transpose();
}

Matrix projector_from(const SvdFactors& f, Eigen::Index n) {
  // I - A^+ A = I - V_r V_r^T; forming it this way keeps it exactly symmetric.
  Matrix p = Matrix::Identity(n, n);
  p.noalias() -= f.v * f.v.transpose();
  return p;
}

}  // namespace

Matrix pseudoinverse(const Matrix& a, std::optional<double> rel_tol) {
  return pinv_from(truncated_svd(a, rel_tol));
}

Matrix nullspace_projector(const Matrix& a, std::optional<double> rel_tol) {
  return projector_from(truncated_svd(a, rel_tol), a.cols());
}

PinvProjector pinv_and_projector(const Matrix& a, std::optional<double> rel_tol) {
  auto f = truncated_svd(a, rel_tol);
  PinvProjector out;
  out.pinv = pinv_from(f);
  out.projector = projector_from(f, a.cols());
  out.rank = std::move(f.rank);
  return out;
}

}  // namespace blorc
