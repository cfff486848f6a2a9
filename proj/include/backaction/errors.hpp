#pragma once

#include <stdexcept>
#include <string>

namespace backaction {

// Bad user input: out-of-range parameters, malformed files, mismatched grids.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation ran but could not meet its accuracy or consistency contract.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws ValidationError("<field>: <what>") unless `ok`.
void require(bool ok, const std::string& field, const std::string& what);

void require_finite(double value, const std::string& field);

}  // namespace backaction
