#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "blorc/linalg.hpp"

namespace blorc {

struct TrainingPair {
  Vector x_clean;
  Vector y_noisy;
};

// Throws InvalidInput if a pair has mismatched lengths, non-finite values, or
// (when n > 0) a length different from n. Returns the common length.
Eigen::Index validate_pairs(const std::vector<TrainingPair>& pairs, Eigen::Index n = 0);

// num_pieces constant segments with distinct breakpoints drawn uniformly from
// 1..n-1 and levels uniform in (0, 1], divided by the largest level so the
// peak is exactly 1.
Vector gen_piecewise_constant(Eigen::Index n, Eigen::Index num_pieces, std::uint64_t seed);

// Inverse orthonormal DCT-II of a coefficient vector with num_harmonics
// nonzero N(0, 1) entries at distinct random frequencies, scaled to a peak
// magnitude of 1.
Vector gen_dct_sparse(Eigen::Index n, Eigen::Index num_harmonics, std::uint64_t seed);

// x + N(0, sigma^2 I). sigma == 0 returns x unchanged.
Vector add_noise(const Vector& x, double sigma, std::uint64_t seed);

enum class SignalKind { kPiecewise, kDct };

// Recipe for a synthetic 1D dataset. Piece / harmonic counts are drawn
// uniformly from [min_parts, max_parts] per signal.
struct SignalSpec {
  SignalKind kind = SignalKind::kPiecewise;
  Eigen::Index n = 64;
  Eigen::Index min_parts = 2;
  Eigen::Index max_parts = 0;  // 0: max(min_parts, n / 8)
  double sigma = 0.1;
};

// count pairs; pair i depends only on (spec, seed, first_index + i).
std::vector<TrainingPair> make_pairs(const SignalSpec& spec, std::size_t count, std::uint64_t seed,
                                     std::uint64_t first_index = 0);

// Image patches
struct PatchGrid {
  Eigen::Index image_height = 0;
  Eigen::Index image_width = 0;
  Eigen::Index patch_side = 0;
  Eigen::Index stride = 1;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> origins;  // (row, col), row-major
};

// Origins along one axis: 0, stride, 2*stride, ... plus a final origin flush
// with the border when the stride does not land there.
std::vector<Eigen::Index> patch_offsets(Eigen::Index length, Eigen::Index p, Eigen::Index stride);

PatchGrid make_patch_grid(Eigen::Index height, Eigen::Index width, Eigen::Index p, Eigen::Index stride);

// Patches are vectorized row-major (index r * p + c).
std::pair<PatchGrid, std::vector<Vector>> extract_patches(const Matrix& image, Eigen::Index p,
                                                          Eigen::Index stride);

// Per-pixel mean of all patch contributions covering the pixel.
Matrix aggregate_patches(const PatchGrid& grid, const std::vector<Vector>& patches);

// Stripes along a direction: value 1 on stripes of width `stripe_width`
// repeating every `period` pixels, 0 elsewhere. diagonal=false gives vertical
// stripes, true gives stripes along the anti-diagonal.
Matrix gen_striped_image(Eigen::Index height, Eigen::Index width, Eigen::Index period,
                         Eigen::Index stripe_width, bool diagonal = false);

Matrix add_noise(const Matrix& image, double sigma, std::uint64_t seed);

}  // namespace blorc
