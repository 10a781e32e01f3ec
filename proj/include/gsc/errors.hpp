#pragma once

#include <stdexcept>
#include <string>

namespace gsc {

// Failure of a numeric procedure (non-SPD factorization, NaN objective, ...).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent input data (files, ids, schemas).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gsc
