#include "backaction/errors.hpp"

#include <cmath>

namespace backaction {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ValidationError(field + ": " + what);
}

void require_finite(double value, const std::string& field) {
  require(std::isfinite(value), field, "must be finite");
}

}  // namespace backaction
