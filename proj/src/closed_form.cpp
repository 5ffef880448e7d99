#include "blorc/closed_form.hpp"

#include <random>

#include "blorc/errors.hpp"
#include "blorc/rng.hpp"

namespace blorc {

RowSplit row_split(const Matrix& w, const SignPattern& pattern) {
  if (static_cast<Eigen::Index>(pattern.size()) != w.rows())
    throw InvalidInput("row_split: pattern length must equal the number of rows of W");
  RowSplit split;
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    if (pattern.values[static_cast<std::size_t>(i)] == 0)
      split.zero_rows.push_back(i);
    else
      split.nonzero_rows.push_back(i);
  }
  const auto k0 = static_cast<Eigen::Index>(split.zero_rows.size());
  const auto kpm = static_cast<Eigen::Index>(split.nonzero_rows.size());
  split.w0.resize(k0, w.cols());
  split.wpm.resize(kpm, w.cols());
  split.s.resize(kpm);
  for (Eigen::Index r = 0; r < k0; ++r) split.w0.row(r) = w.row(split.zero_rows[static_cast<std::size_t>(r)]);
  for (Eigen::Index r = 0; r < kpm; ++r) {
    const auto i = split.nonzero_rows[static_cast<std::size_t>(r)];
    split.wpm.row(r) = w.row(i);
    split.s(r) = pattern.values[static_cast<std::size_t>(i)];
  }
  return split;
}

Vector closed_form_reconstruct(const RowSplit& split, const Vector& y, double beta,
                               std::optional<double> rel_tol) {
  if (split.cols() != y.size() || split.wpm.cols() != y.size())
    throw InvalidInput("closed_form_reconstruct: split does not match y length");
  Vector q = y;
  if (split.wpm.rows() > 0) q.noalias() -= beta * split.wpm.transpose() * split.s;
  if (split.w0.rows() == 0) return q;
  return nullspace_projector(split.w0, rel_tol) * q;
}

double sign_stability_probe(const Matrix& w, const Vector& y, double eta, int trials,
                            const AdmmParams& params, double gamma, std::uint64_t seed,
                            double beta) {
  if (!(eta >= 0.0)) throw InvalidInput("sign_stability_probe: eta must be >= 0");
  if (trials < 1) throw InvalidInput("sign_stability_probe: trials must be >= 1");
  AdmmParams p = params;
  p.sign_threshold = gamma;
  const SignPattern base = admm_denoise(w, y, beta, p).sign_pattern;

  std::mt19937_64 gen = make_rng(seed, RngPurpose::kPerturbation);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  int same = 0;
  for (int t = 0; t < trials; ++t) {
    Matrix perturbed = w;
    for (Eigen::Index i = 0; i < perturbed.size(); ++i) perturbed.data()[i] += eta * unit(gen);
    if (admm_denoise(perturbed, y, beta, p).sign_pattern == base) ++same;
  }
  return static_cast<double>(same) / trials;
}

}  // namespace blorc
