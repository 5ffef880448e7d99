#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "blorc/data.hpp"
#include "blorc/denoise.hpp"
#include "blorc/linalg.hpp"

namespace blorc {

// (n-1) x n forward differences: row i has -1 at column i and +1 at i+1.
Matrix finite_difference_matrix(Eigen::Index n);

// Orthonormal DCT-II; row k is the k-th cosine basis vector.
Matrix dct_matrix(Eigen::Index n);

struct GoldenSectionSpec {
  double lo = 1e-4;
  double hi = 2.0;
  double tol = 1e-3;  // stop once the bracket is narrower than this
  int max_evals = 40;

  void validate() const;  // throws InvalidInput
};

struct GoldenSectionResult {
  double x = 0.0;   // best point evaluated
  double fx = 0.0;
  int evals = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

// Golden-section minimization of f over [spec.lo, spec.hi]. Returns the best
// point seen, so a non-unimodal f still yields an evaluated minimum.
GoldenSectionResult golden_section_minimize(const std::function<double(double)>& f,
                                            const GoldenSectionSpec& spec);

// Minimizes the mean upper-level loss of denoising val_pairs with lambda * W.
GoldenSectionResult golden_section_lambda(const Matrix& w, const std::vector<TrainingPair>& val_pairs,
                                          const GoldenSectionSpec& spec, const AdmmParams& params);

struct UnsupervisedParams {
  int iters = 500;
  double rho = 1.0;
  double lambda = 0.1;  // weight of the l1 term
  bool random_init = false;  // identity start unless set; random draws use the seed
};

struct UnsupervisedResult {
  Matrix w;
  // sum_t ||W x_t||_1 at the start and after every W update.
  std::vector<double> objective;
};

// ADMM for min_W sum_t ||W x_t||_1 subject to W W^T = I, with split z_t = W x_t.
// The W-update is the orthogonal Procrustes solution U V^T.
UnsupervisedResult unsupervised_orthogonal_learn(const std::vector<Vector>& clean_signals,
                                                 const UnsupervisedParams& params, std::uint64_t seed = 0);

double sparsity_objective(const Matrix& w, const Matrix& signals);  // sum of |entries| of W X

}  // namespace blorc
