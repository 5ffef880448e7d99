#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "blorc/linalg.hpp"

namespace blorc {

inline constexpr double kDefaultSignThreshold = 1e-3;

// Hard-thresholded sign of W x*. values[i] is 0 iff |[W x*]_i| < threshold.
struct SignPattern {
  std::vector<std::int8_t> values;
  double threshold = kDefaultSignThreshold;
  // Rows whose magnitude lies in [threshold/2, 2*threshold]; a misclassified
  // row silently corrupts the gradient, so these are counted for diagnostics.
  std::size_t ambiguous_rows = 0;

  std::size_t size() const { return values.size(); }
  std::size_t zero_count() const;
  friend bool operator==(const SignPattern& a, const SignPattern& b) { return a.values == b.values; }
};

// Pattern of an already computed transform-domain vector W x*.
SignPattern sign_pattern_of(const Vector& transformed, double gamma);

// Throws InvalidInput on dimension mismatch or gamma <= 0.
SignPattern sign_pattern(const Matrix& w, const Vector& x_star, double gamma);

// Smallest | |[W x*]_i| - gamma | over all rows; +inf for an empty transform.
double threshold_margin(const Vector& transformed, double gamma);

}  // namespace blorc
