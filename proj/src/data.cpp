#include "blorc/data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "blorc/errors.hpp"
#include "blorc/rng.hpp"

namespace blorc {

Eigen::Index validate_pairs(const std::vector<TrainingPair>& pairs, Eigen::Index n) {
  for (const auto& pr : pairs) {
    if (pr.x_clean.size() != pr.y_noisy.size()) throw InvalidInput("training pair lengths differ");
    if (n == 0) n = pr.x_clean.size();
    if (pr.x_clean.size() != n) throw InvalidInput("training pairs have inconsistent lengths");
    if (!pr.x_clean.allFinite() || !pr.y_noisy.allFinite()) throw InvalidInput("training pair has non-finite values");
  }
  return n;
}

Vector gen_piecewise_constant(Eigen::Index n, Eigen::Index num_pieces, std::uint64_t seed) {
  if (n < 1 || num_pieces < 1 || num_pieces > n)
    throw InvalidInput("gen_piecewise_constant: need 1 <= num_pieces <= n");
  auto gen = make_rng(seed, RngPurpose::kSignal);

  std::vector<Eigen::Index> cuts(static_cast<std::size_t>(n - 1));
  std::iota(cuts.begin(), cuts.end(), Eigen::Index{1});
  std::shuffle(cuts.begin(), cuts.end(), gen);
  cuts.resize(static_cast<std::size_t>(num_pieces - 1));
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(n);

  std::uniform_real_distribution<double> level(0.0, 1.0);
  Vector x(n);
  Eigen::Index start = 0;
  for (const auto end : cuts) {
    const double v = 1.0 - level(gen);  // (0, 1]
    x.segment(start, end - start).setConstant(v);
    start = end;
  }
  return x / x.maxCoeff();
}

namespace {

// Orthonormal DCT-II basis vector k evaluated at sample j.
double dct_entry(Eigen::Index k, Eigen::Index j, Eigen::Index n) {
  const double scale = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
  return scale * std::cos(M_PI * (2.0 * j + 1.0) * k / (2.0 * n));
}

}  // namespace

Vector gen_dct_sparse(Eigen::Index n, Eigen::Index num_harmonics, std::uint64_t seed) {
  if (n < 1 || num_harmonics < 1 || num_harmonics > n)
    throw InvalidInput("gen_dct_sparse: need 1 <= num_harmonics <= n");
  auto gen = make_rng(seed, RngPurpose::kSignal);
  std::vector<Eigen::Index> freqs(static_cast<std::size_t>(n));
  std::iota(freqs.begin(), freqs.end(), Eigen::Index{0});
  std::shuffle(freqs.begin(), freqs.end(), gen);
  freqs.resize(static_cast<std::size_t>(num_harmonics));

  std::normal_distribution<double> normal;
  Vector x = Vector::Zero(n);
  for (const auto k : freqs) {
    double c = normal(gen);
    while (std::abs(c) < 1e-3) c = normal(gen);
    for (Eigen::Index j = 0; j < n; ++j) x(j) += c * dct_entry(k, j, n);
  }
  return x / x.cwiseAbs().maxCoeff();
}

Vector add_noise(const Vector& x, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw InvalidInput("add_noise: sigma must be >= 0");
  if (sigma == 0.0) return x;
  auto gen = make_rng(seed, RngPurpose::kNoise);
  std::normal_distribution<double> normal(0.0, sigma);
  Vector y = x;
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += normal(gen);
  return y;
}

Matrix add_noise(const Matrix& image, double sigma, std::uint64_t seed) {
  const Vector flat = Eigen::Map<const Vector>(image.data(), image.size());
  const Vector noisy = add_noise(flat, sigma, seed);
  return Eigen::Map<const Matrix>(noisy.data(), image.rows(), image.cols());
}

std::vector<TrainingPair> make_pairs(const SignalSpec& spec, std::size_t count, std::uint64_t seed,
                                     std::uint64_t first_index) {
  const Eigen::Index max_parts =
      spec.max_parts > 0 ? spec.max_parts : std::max(spec.min_parts, spec.n / 8);
  if (spec.min_parts < 1 || max_parts < spec.min_parts || max_parts > spec.n)
    throw InvalidInput("make_pairs: invalid part-count range");
  std::vector<TrainingPair> pairs;
  pairs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t idx = first_index + i;
    auto gen = make_rng(seed, RngPurpose::kInstance, idx);
    std::uniform_int_distribution<Eigen::Index> parts(spec.min_parts, max_parts);
    const Eigen::Index m = parts(gen);
    const std::uint64_t sub = gen();
    Vector x = spec.kind == SignalKind::kPiecewise ? gen_piecewise_constant(spec.n, m, sub)
                                                   : gen_dct_sparse(spec.n, m, sub);
    Vector y = add_noise(x, spec.sigma, gen());
    pairs.push_back({std::move(x), std::move(y)});
  }
  return pairs;
}

std::vector<Eigen::Index> patch_offsets(Eigen::Index length, Eigen::Index p, Eigen::Index stride) {
  std::vector<Eigen::Index> out;
  for (Eigen::Index o = 0; o + p <= length; o += stride) out.push_back(o);
  if (out.empty() || out.back() != length - p) out.push_back(length - p);
  return out;
}

PatchGrid make_patch_grid(Eigen::Index height, Eigen::Index width, Eigen::Index p, Eigen::Index stride) {
  if (p < 1 || p > std::min(height, width)) throw InvalidInput("patch side must fit inside the image");
  if (stride < 1) throw InvalidInput("patch stride must be >= 1");
  PatchGrid grid{height, width, p, stride, {}};
  const auto rows = patch_offsets(height, p, stride);
  const auto cols = patch_offsets(width, p, stride);
  for (const auto r : rows)
    for (const auto c : cols) grid.origins.emplace_back(r, c);
  return grid;
}

std::pair<PatchGrid, std::vector<Vector>> extract_patches(const Matrix& image, Eigen::Index p,
                                                          Eigen::Index stride) {
  PatchGrid grid = make_patch_grid(image.rows(), image.cols(), p, stride);
  std::vector<Vector> patches;
  patches.reserve(grid.origins.size());
  for (const auto& [r0, c0] : grid.origins) {
    Vector v(p * p);
    for (Eigen::Index r = 0; r < p; ++r)
      for (Eigen::Index c = 0; c < p; ++c) v(r * p + c) = image(r0 + r, c0 + c);
    patches.push_back(std::move(v));
  }
  return {std::move(grid), std::move(patches)};
}

Matrix aggregate_patches(const PatchGrid& grid, const std::vector<Vector>& patches) {
  if (patches.size() != grid.origins.size())
    throw InvalidInput("aggregate_patches: patch count does not match the grid");
  const Eigen::Index p = grid.patch_side;
  // Accumulate deviations from each pixel's first contribution; when all
  // contributions agree the deviations are exactly zero, so untouched patches
  // round-trip bit-exactly for any coverage count.
  Matrix first(grid.image_height, grid.image_width);
  Matrix dev = Matrix::Zero(grid.image_height, grid.image_width);
  Matrix count = Matrix::Zero(grid.image_height, grid.image_width);
  for (std::size_t i = 0; i < patches.size(); ++i) {
    if (patches[i].size() != p * p) throw InvalidInput("aggregate_patches: patch has wrong length");
    const auto [r0, c0] = grid.origins[i];
    for (Eigen::Index r = 0; r < p; ++r)
      for (Eigen::Index c = 0; c < p; ++c) {
        const double v = patches[i](r * p + c);
        double& cnt = count(r0 + r, c0 + c);
        if (cnt == 0.0)
          first(r0 + r, c0 + c) = v;
        else
          dev(r0 + r, c0 + c) += v - first(r0 + r, c0 + c);
        cnt += 1.0;
      }
  }
  if ((count.array() == 0.0).any()) throw InvalidInput("aggregate_patches: grid leaves pixels uncovered");
  return first + dev.cwiseQuotient(count);
}

Matrix gen_striped_image(Eigen::Index height, Eigen::Index width, Eigen::Index period,
                         Eigen::Index stripe_width, bool diagonal) {
  if (period < 1 || stripe_width < 0 || stripe_width > period)
    throw InvalidInput("gen_striped_image: need 0 <= stripe_width <= period");
  Matrix img(height, width);
  for (Eigen::Index r = 0; r < height; ++r)
    for (Eigen::Index c = 0; c < width; ++c) {
      const Eigen::Index t = diagonal ? r + c : c;
      img(r, c) = (t % period) < stripe_width ? 1.0 : 0.0;
    }
  return img;
}

}  // namespace blorc
