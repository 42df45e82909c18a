// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace waistlab {

//! Input lies outside the mathematical domain of an operation
//! (negative radius, point on the wrong side of a pole cutoff, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

//! Structured input fails a consistency requirement (mismatched totals,
//! non-monotone data, a map that is not 1-Lipschitz, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

//! A numerical procedure failed to reach its accuracy target.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

//! The request is well-formed but too large for this machine-scale toolkit
//! (for example a Monte Carlo problem whose dimension defeats the budget).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace waistlab
