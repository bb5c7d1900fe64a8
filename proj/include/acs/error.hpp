#pragma once

#include <stdexcept>
#include <string>

namespace acs {

// Ingestion / I-O problems: missing files, malformed CSV cells, bad schemas.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failures: singular fits, non-convergence, invalid posteriors.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace acs
