// SPDX-License-Identifier: Apache-2.0
// Frozen experiment settings.
#pragma once

namespace fixtures {

// Small-data amplitude from tools/calibrate (start 1e-3, halving; seeds 0..4,
// d = 2, n = 128, dt = 0.02, t_end = 50, s = -1/4). Passed at the first try
// with worst max_t E/E(0) = 1.7497 against 2 kappa2 = 2.8284.
inline constexpr double kSmallDataAmplitude = 1e-3;
inline constexpr double kSmallDataDt = 0.02;

}  // namespace fixtures
