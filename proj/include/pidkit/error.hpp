#pragma once

#include <stdexcept>
#include <string>

namespace pidkit {

// Violated precondition or an undefined operation on valid data
// (conditioning on a null event, non-invertible relabeling, ...).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input: bad JSON, probabilities that do not sum to one.
class InputError : public Error {
 public:
  using Error::Error;
};

// Requested structure exceeds the configured size cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace pidkit
