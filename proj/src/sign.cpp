#include "blorc/sign.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blorc/errors.hpp"

namespace blorc {

std::size_t SignPattern::zero_count() const {
  return static_cast<std::size_t>(std::count(values.begin(), values.end(), std::int8_t{0}));
}

SignPattern sign_pattern_of(const Vector& transformed, double gamma) {
  if (!(gamma > 0.0)) throw InvalidInput("sign_pattern: gamma must be positive");
  SignPattern p;
  p.threshold = gamma;
  p.values.resize(static_cast<std::size_t>(transformed.size()));
  for (Eigen::Index i = 0; i < transformed.size(); ++i) {
    const double v = transformed(i);
    const double mag = std::abs(v);
    std::int8_t s = 0;
    if (mag >= gamma) s = v > 0 ? 1 : -1;
    p.values[static_cast<std::size_t>(i)] = s;
    if (mag >= 0.5 * gamma && mag <= 2.0 * gamma) ++p.ambiguous_rows;
  }
  return p;
}

SignPattern sign_pattern(const Matrix& w, const Vector& x_star, double gamma) {
  if (w.cols() != x_star.size()) throw InvalidInput("sign_pattern: W columns must match x length");
  return sign_pattern_of(w * x_star, gamma);
}

double threshold_margin(const Vector& transformed, double gamma) {
  double m = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < transformed.size(); ++i)
    m = std::min(m, std::abs(std::abs(transformed(i)) - gamma));
  return m;
}

}  // namespace blorc
