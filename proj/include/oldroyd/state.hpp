// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "oldroyd/field.hpp"
#include "oldroyd/params.hpp"

namespace oldroyd {

struct SolverState {
  Scalar t = 0;
  VelocityField u;
  StressField tau;
  FluidParams params;
  std::int64_t step_index = 0;
};

}  // namespace oldroyd
