// SPDX-License-Identifier: Apache-2.0
#include "oldroyd/random_fields.hpp"

#include <cmath>

#include "oldroyd/spectral.hpp"

namespace oldroyd {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Scalar to_unit(std::uint64_t x) { return static_cast<Scalar>(x >> 11) * 0x1.0p-53; }

std::uint64_t mode_key(std::uint64_t seed, int component, const std::array<int, 3>& m) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(component + 1));
  for (int a : m) h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(a) + 0x100000));
  return h;
}

// Canonical member of the pair {m, -m}: first nonzero entry positive.
bool is_canonical(const std::array<int, 3>& m) {
  for (int a : m) {
    if (a > 0) return true;
    if (a < 0) return false;
  }
  return false;
}

}  // namespace

Scalar hashed_uniform(std::uint64_t seed, std::uint64_t counter) {
  return to_unit(splitmix64(splitmix64(seed) ^ splitmix64(counter + 0x51ED270B27AULL)));
}

template <FieldKind K>
Field<K> random_field(const GridPtr& grid, const BandSpec& band, std::uint64_t seed) {
  Field<K> f(grid);
  const int d = grid->dim();
  const ArrayXs& mask = grid->dealias_mask();
  const ArrayXs& k2 = grid->k_squared();
  for (Index idx = 0; idx < grid->size(); ++idx) {
    if (mask(idx) == 0 || k2(idx) == 0) continue;
    const Scalar kk = std::sqrt(k2(idx));
    if (kk < band.k_min - 1e-12 || kk > band.k_max + 1e-12) continue;
    std::array<int, 3> m{0, 0, 0};
    for (int a = 0; a < d; ++a) m[a] = grid->mode(idx, a);
    if (!is_canonical(m)) continue;
    const Scalar envelope = band.slope == 0 ? 1.0 : std::pow(kk, -band.slope);
    const Index neg = grid->negative(idx);
    for (int c = 0; c < f.components(); ++c) {
      const std::uint64_t h = mode_key(seed, c, m);
      const Scalar u1 = std::max(to_unit(h), 1e-300);
      const Scalar u2 = to_unit(splitmix64(h));
      const Scalar r = std::sqrt(-2.0 * std::log(u1));
      const Complex z = envelope * r * std::polar(1.0, kTwoPi * u2);
      f[c](idx) = z;
      f[c](neg) = std::conj(z);
    }
  }
  return f;
}

VelocityField random_velocity(const GridPtr& grid, const BandSpec& band, std::uint64_t seed) {
  return leray_project(random_field<FieldKind::Vector>(grid, band, seed));
}

template ScalarField random_field(const GridPtr&, const BandSpec&, std::uint64_t);
template VectorField random_field(const GridPtr&, const BandSpec&, std::uint64_t);
template StressField random_field(const GridPtr&, const BandSpec&, std::uint64_t);
template SpinField random_field(const GridPtr&, const BandSpec&, std::uint64_t);

}  // namespace oldroyd
