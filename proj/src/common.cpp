#include "spoly/common.hpp"

namespace spoly {

Tolerances& tolerances() {
  static Tolerances t;
  return t;
}

}  // namespace spoly
