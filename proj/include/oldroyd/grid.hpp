// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <memory>
#include <vector>

#include "oldroyd/types.hpp"

namespace oldroyd {

namespace detail {
struct FftPlans;
}

/// Uniform periodic grid on the d-torus [0, L)^d with its Fourier index maps.
///
/// Flat indices are row-major over the axes (axis 0 slowest). Spectral
/// coefficients use the convention f(x) = sum_k fhat(k) exp(i k.x), so the
/// forward transform carries the 1/N normalization. The Nyquist plane of each
/// axis is treated as unresolved and kept at zero.
class TorusGrid {
 public:
  TorusGrid(int dim, int n, Scalar period = kTwoPi);

  int dim() const noexcept { return dim_; }
  int n() const noexcept { return n_; }
  Scalar period() const noexcept { return period_; }
  Index size() const noexcept { return size_; }

  // Fundamental wavenumber 2 pi / L.
  Scalar k0() const noexcept { return kTwoPi / period_; }
  Scalar nyquist() const noexcept { return k0() * (n_ / 2); }
  Scalar box_volume() const noexcept;
  Scalar cell_volume() const noexcept { return box_volume() / static_cast<Scalar>(size_); }

  // Largest retained integer wavenumber per axis under the 2/3 rule.
  int dealias_cutoff() const noexcept { return n_ / 3; }

  // Signed integer mode of flat index `idx` along `axis`, in [-n/2, n/2).
  int mode(Index idx, int axis) const noexcept { return modes_[axis](idx); }
  const ArrayX<int>& modes(int axis) const noexcept { return modes_[axis]; }
  const ArrayXs& wavenumber(int axis) const noexcept { return k_[axis]; }
  const ArrayXs& k_squared() const noexcept { return k2_; }

  // Flat index of -k. Nyquist and zero modes map onto themselves.
  Index negative(Index idx) const noexcept { return neg_[idx]; }
  const std::vector<Index>& negative_map() const noexcept { return neg_; }

  bool is_nyquist(Index idx) const noexcept { return nyquist_(idx) != 0; }
  // 1 on modes kept by the 2/3 rule (cube |m_a| <= n/3), 0 elsewhere.
  const ArrayXs& dealias_mask() const noexcept { return mask_; }
  // 1 on every non-Nyquist mode.
  const ArrayXs& resolved_mask() const noexcept { return resolved_; }

  Index flat_index(const std::array<int, 3>& m) const noexcept;

  // Physical coordinate of grid point `idx` along `axis`.
  Scalar coordinate(Index idx, int axis) const noexcept;

  // spec = FFT(phys) / N.
  void forward(const ArrayXc& phys, ArrayXc& spec) const;
  // phys = IFFT(spec) * N, i.e. evaluation of the Fourier series on the grid.
  void inverse(const ArrayXc& spec, ArrayXc& phys) const;

  bool operator==(const TorusGrid& other) const noexcept {
    return dim_ == other.dim_ && n_ == other.n_ && period_ == other.period_;
  }

 private:
  int dim_;
  int n_;
  Scalar period_;
  Index size_;
  std::array<ArrayX<int>, 3> modes_;
  std::array<ArrayXs, 3> k_;
  ArrayXs k2_;
  std::vector<Index> neg_;
  ArrayX<int> nyquist_;
  ArrayXs mask_;
  ArrayXs resolved_;
  std::shared_ptr<detail::FftPlans> plans_;
};

using GridPtr = std::shared_ptr<const TorusGrid>;

inline GridPtr make_grid(int dim, int n, Scalar period = kTwoPi) {
  return std::make_shared<const TorusGrid>(dim, n, period);
}

}  // namespace oldroyd
