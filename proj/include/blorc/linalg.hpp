#pragma once

#include <optional>

#include <Eigen/Dense>

namespace blorc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Singular values of a matrix together with the numerical rank implied by a
// relative cutoff. rank counts singular values strictly above `tolerance`.
struct RankDecision {
  Vector singular_values;
  double tolerance = 0.0;
  Eigen::Index rank = 0;
};

// The default relative cutoff: max(rows, cols) * machine epsilon.
double default_rel_tol(const Matrix& a);

// A thin SVD with a rank decision attached. Every pseudoinverse and projector
// in the library is built from this one factorization so rank decisions agree
// between the reconstruction and gradient paths.
struct SvdFactors {
  Matrix u;  // rows x r
  Vector s;  // r singular values above the cutoff
  Matrix v;  // cols x r
  RankDecision rank;
};

// Throws InvalidInput on non-finite entries or rel_tol outside (0, 1).
SvdFactors truncated_svd(const Matrix& a, std::optional<double> rel_tol = std::nullopt);

RankDecision rank_decision(const Matrix& a, std::optional<double> rel_tol = std::nullopt);

// Moore-Penrose pseudoinverse; singular values <= rel_tol * sigma_max are dropped.
Matrix pseudoinverse(const Matrix& a, std::optional<double> rel_tol = std::nullopt);

// P = I - A^+ A, the orthogonal projector onto the nullspace of A (n x n for n
// columns). An empty (0 x n) matrix yields the identity.
Matrix nullspace_projector(const Matrix& a, std::optional<double> rel_tol = std::nullopt);

// Both of the above from a single SVD.
struct PinvProjector {
  Matrix pinv;
  Matrix projector;
  RankDecision rank;
};
PinvProjector pinv_and_projector(const Matrix& a, std::optional<double> rel_tol = std::nullopt);

bool all_finite(const Matrix& a);

}  // namespace blorc
