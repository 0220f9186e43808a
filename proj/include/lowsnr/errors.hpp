#pragma once

#include <stdexcept>
#include <string>

namespace lowsnr {

// Argument outside the real domain of a formula (pole, branch cut, log of a
// non-positive number).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Argument outside the validated low-SNR regime.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Input distribution would violate its own invariants (p1 > 1, masses not
// summing to one, unsorted locations).
class ConstraintError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Iterative scheme ran out of budget before meeting its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Energy per nat is undefined once the sub-linear term reaches the SNR.
class DegenerateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace lowsnr
