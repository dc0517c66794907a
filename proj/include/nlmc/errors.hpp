#pragma once

#include <stdexcept>
#include <string>

namespace nlmc {

/// Invalid input data: bad sizes, malformed files, inconsistent configuration.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A linear solve or factorization did not reach its tolerance.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nlmc
