#pragma once

#include <stdexcept>
#include <string>

namespace maxstab {

/// Parameter outside its admissible range (bad alpha, negative scale, ...).
class domain_error : public std::invalid_argument {
 public:
  explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

/// A caller broke an interface contract (misaligned measure, missing vertex, ...).
class contract_error : public std::invalid_argument {
 public:
  explicit contract_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Numerical failure: factorization, singular system, safety cap, non-convergence.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// Threshold calibration could not reach its target.
class calibration_error : public std::runtime_error {
 public:
  explicit calibration_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace maxstab
