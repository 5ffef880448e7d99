#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace blorc {

class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised by the lower-level solver when the iteration budget runs out.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, int iterations, double primal_residual,
                   double dual_residual)
      : std::runtime_error(what),
        iterations_(iterations),
        primal_residual_(primal_residual),
        dual_residual_(dual_residual) {}

  int iterations() const { return iterations_; }
  double primal_residual() const { return primal_residual_; }
  double dual_residual() const { return dual_residual_; }

 private:
  int iterations_;
  double primal_residual_;
  double dual_residual_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace blorc
