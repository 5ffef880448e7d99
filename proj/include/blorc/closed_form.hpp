#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "blorc/denoise.hpp"
#include "blorc/linalg.hpp"
#include "blorc/sign.hpp"

namespace blorc {

// Partition of the rows of W by the sign pattern of W x*.
//  - w0 holds the rows where W x* vanishes, wpm the remaining rows copied
//    verbatim (not sign flipped); s carries their signs, so wpm^T s matches
//    the flipped-row convention.
//  - zero_rows / nonzero_rows are the original row indices, sorted.
struct RowSplit {
  Matrix w0;
  Matrix wpm;
  Vector s;
  std::vector<Eigen::Index> zero_rows;
  std::vector<Eigen::Index> nonzero_rows;

  Eigen::Index cols() const { return w0.cols(); }
};

// Throws InvalidInput when the pattern length differs from W's row count.
RowSplit row_split(const Matrix& w, const SignPattern& pattern);

// x* = (I - W0^+ W0)(y - beta Wpm^T s), with the pseudoinverse taken by SVD so
// rank-deficient W0 is handled.
Vector closed_form_reconstruct(const RowSplit& split, const Vector& y, double beta,
                               std::optional<double> rel_tol = std::nullopt);

// Fraction of `trials` random perturbations dW (entries uniform in [-eta, eta])
// for which the sign pattern of the re-solved lower-level problem matches the
// unperturbed one. Propagates ConvergenceError.
double sign_stability_probe(const Matrix& w, const Vector& y, double eta, int trials,
                            const AdmmParams& params, double gamma, std::uint64_t seed = 0,
                            double beta = 1.0);

}  // namespace blorc
