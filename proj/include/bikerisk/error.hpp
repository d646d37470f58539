#pragma once

#include <stdexcept>
#include <string>

namespace bikerisk {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or queries (caller error).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Input data that cannot be used (unparseable, empty, inconsistent).
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace bikerisk
