// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "oldroyd/errors.hpp"
#include "oldroyd/types.hpp"

namespace oldroyd {

// Dimensionless Oldroyd-B parameters.
struct FluidParams {
  Scalar re = 1.0;     // Reynolds number
  Scalar we = 1.0;     // Weissenberg number
  Scalar omega = 0.5;  // coupling constant
  Scalar alpha = 0.0;  // slip parameter

  void validate() const {
    if (!(re > 0)) throw ConfigError("re must be positive");
    if (!(we > 0)) throw ConfigError("we must be positive");
    if (!(omega > 0 && omega < 1)) throw ConfigError("omega must lie in (0, 1)");
    if (!(alpha >= -1 && alpha <= 1)) throw ConfigError("alpha must lie in [-1, 1]");
  }
};

}  // namespace oldroyd
