// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "oldroyd/field.hpp"

namespace oldroyd {

/// Radial band and spectral envelope for random test and initial data.
struct BandSpec {
  Scalar k_min = 1.0;
  Scalar k_max = 8.0;
  // Amplitude envelope |k|^(-slope).
  Scalar slope = 0.0;
};

// Random Hermitian, mean-zero field supported on k_min <= |k| <= k_max within
// the dealiasing mask. Amplitudes are drawn per integer wavevector from a
// counter-based generator, so the same (seed, band) gives the same function
// on every grid that resolves the band.
template <FieldKind K>
Field<K> random_field(const GridPtr& grid, const BandSpec& band, std::uint64_t seed);

// Leray-projected random velocity.
VelocityField random_velocity(const GridPtr& grid, const BandSpec& band, std::uint64_t seed);

// Uniform double in [0, 1) from a counter-based hash, used to derive
// per-sample parameters reproducibly.
Scalar hashed_uniform(std::uint64_t seed, std::uint64_t counter);

}  // namespace oldroyd
