// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <limits>
#include <vector>

#include "oldroyd/field.hpp"

namespace oldroyd {

inline constexpr Scalar kInfinity = std::numeric_limits<Scalar>::infinity();

// ---------------------------------------------------------------------------
// Radial partition of unity
// ---------------------------------------------------------------------------

// psi(t) / (psi(t) + psi(1 - t)) with psi(t) = exp(-1/t) for t > 0, else 0.
Scalar smooth_transition(Scalar t);

// Radial low-frequency cutoff: 1 on |xi| <= 3/4, 0 on |xi| >= 4/3.
Scalar chi(Scalar r);

// Annulus bump chi(r/2) - chi(r), supported in 3/4 <= |xi| <= 8/3.
Scalar phi(Scalar r);

/// The couple (chi, phi) tabulated on the wavevectors of one grid.
///
/// Every mode k != 0 meets at most two blocks, q = lower(k) and lower(k) + 1;
/// the per-mode weights phi(2^-q |k|) for those two blocks are stored so that
/// block restrictions and block norms cost one pass over the modes.
class DyadicPartition {
 public:
  explicit DyadicPartition(const TorusGrid& grid);

  int q_min() const noexcept { return q_min_; }
  int q_max() const noexcept { return q_max_; }
  int block_count() const noexcept { return q_max_ - q_min_ + 1; }
  bool in_range(int q) const noexcept { return q >= q_min_ && q <= q_max_; }
  int dim() const noexcept { return dim_; }
  Index size() const noexcept { return lower_.size(); }

  // phi(2^-q |k|) per mode.
  ArrayXs block_multiplier(int q) const;
  // chi(2^-q |k|) per mode.
  ArrayXs cutoff_multiplier(int q) const;

  const ArrayX<int>& lower_block() const noexcept { return lower_; }
  const ArrayXs& lower_weight() const noexcept { return w_lo_; }
  const ArrayXs& upper_weight() const noexcept { return w_hi_; }

  // Distinct nonzero |k| over resolved modes, ascending.
  const std::vector<Scalar>& radii() const noexcept { return radii_; }

  // max over resolved radii of |sum_{q in range} phi(2^-q r) - 1|.
  Scalar homogeneous_residual() const;
  // max over resolved radii (and r = 0) of |chi(r) + sum_{q >= 0} phi(2^-q r) - 1|.
  Scalar inhomogeneous_residual() const;

 private:
  int dim_;
  int q_min_;
  int q_max_;
  ArrayX<int> lower_;
  ArrayXs w_lo_;
  ArrayXs w_hi_;
  ArrayXs radius_;
  std::vector<Scalar> radii_;
};

// ---------------------------------------------------------------------------
// Block norms and Besov-type aggregates
// ---------------------------------------------------------------------------

/// ||Delta_q f||_{L2} for q = q_min .. q_min + values.size() - 1.
struct BlockNorms {
  int q_min = 0;
  std::vector<Scalar> values;

  int q_max() const noexcept { return q_min + static_cast<int>(values.size()) - 1; }
  Scalar at(int q) const noexcept {
    const int i = q - q_min;
    return i >= 0 && i < static_cast<int>(values.size()) ? values[static_cast<size_t>(i)] : 0.0;
  }
};

// Per-block L2 norms of f, or of its `order`-th gradient when order > 0
// (the |k|^(2 order) weighted block energies).
template <FieldKind K>
BlockNorms block_norms(const Field<K>& f, const DyadicPartition& part, int order = 0);

/// Regularity s, integrability p (only 2 is supported for norms) and
/// summation exponent r in {1, 2, infinity}.
struct BesovIndex {
  Scalar s = 0;
  Scalar p = 2;
  Scalar r = 2;
};

void validate(const BesovIndex& idx);

// l^r over q of 2^{qs} b_q.
Scalar besov_from_blocks(const BlockNorms& b, Scalar s, Scalar r);

struct HybridNorm {
  Scalar value = 0;
  Scalar low = 0;   // (sum_{q<0} 2^{2qs} b_q^2)^{1/2}
  Scalar high = 0;  // sum_{q>=0} 2^{q d/2} b_q
};

HybridNorm hybrid_from_blocks(const BlockNorms& b, Scalar s, int dim);

enum class Side { Low, High };

// l^1 sum of 2^{qs} b_q restricted to q < 0 or q >= 0.
Scalar split_from_blocks(const BlockNorms& b, Scalar s, Side side);

template <FieldKind K>
Scalar besov_norm(const Field<K>& f, const BesovIndex& idx, const DyadicPartition& part);
template <FieldKind K>
Scalar besov_norm(const Field<K>& f, const BesovIndex& idx);

template <FieldKind K>
HybridNorm hybrid_norm(const Field<K>& f, Scalar s, const DyadicPartition& part);
template <FieldKind K>
HybridNorm hybrid_norm(const Field<K>& f, Scalar s);

template <FieldKind K>
Scalar split_norm(const Field<K>& f, Scalar s, Side side, const DyadicPartition& part);
template <FieldKind K>
Scalar split_norm(const Field<K>& f, Scalar s, Side side);

// Fourier-weighted (sum_k |k|^{2s} |fhat(k)|^2 L^d)^{1/2}.
template <FieldKind K>
Scalar sobolev_fourier_norm(const Field<K>& f, Scalar s);

// ---------------------------------------------------------------------------
// Time norms
// ---------------------------------------------------------------------------

// L^rho over the sampled times: trapezoid for finite rho, max for infinity.
Scalar time_norm(const std::vector<Scalar>& times, const std::vector<Scalar>& values, Scalar rho);

struct BlockSeries {
  std::vector<Scalar> times;
  std::vector<BlockNorms> samples;
};

// || 2^{qs} ||Delta_q u||_{L^rho_T(L2)} ||_{l^r}
Scalar chemin_lerner_norm(const BlockSeries& series, Scalar rho, const BesovIndex& idx);
// || ||u(t)||_{B^s_{2,r}} ||_{L^rho_T}, for comparison with the above.
Scalar classical_time_norm(const BlockSeries& series, Scalar rho, const BesovIndex& idx);

template <FieldKind K>
Scalar chemin_lerner_norm(const std::vector<Scalar>& times, const std::vector<Field<K>>& samples, Scalar rho,
                          const BesovIndex& idx);

// ---------------------------------------------------------------------------
// Block operators
// ---------------------------------------------------------------------------

template <FieldKind K>
struct BlockResult {
  Field<K> field;
  // Set when q was outside the resolved block range. `field` is then zero,
  // except for low_cutoff above the range, where it is the resolved part of f.
  bool out_of_range = false;
};

template <FieldKind K>
BlockResult<K> dyadic_block(const Field<K>& f, int q, const DyadicPartition& part);
template <FieldKind K>
BlockResult<K> dyadic_block(const Field<K>& f, int q);

template <FieldKind K>
BlockResult<K> low_cutoff(const Field<K>& f, int q, const DyadicPartition& part);
template <FieldKind K>
BlockResult<K> low_cutoff(const Field<K>& f, int q);

// T_f g = sum_q S_{q-1} f Delta_q g.
ScalarField paraproduct(const ScalarField& f, const ScalarField& g, const DyadicPartition& part);
ScalarField paraproduct(const ScalarField& f, const ScalarField& g);

// R(f, g) = sum_q Delta_q f (Delta_{q-1} + Delta_q + Delta_{q+1}) g.
ScalarField remainder(const ScalarField& f, const ScalarField& g, const DyadicPartition& part);
ScalarField remainder(const ScalarField& f, const ScalarField& g);

// [Delta_q, u] . grad tau = Delta_q (u . grad tau) - u . grad (Delta_q tau).
StressField commutator(int q, const VelocityField& u, const StressField& tau, const DyadicPartition& part);
StressField commutator(int q, const VelocityField& u, const StressField& tau);

// ---------------------------------------------------------------------------
// Bernstein inequalities
// ---------------------------------------------------------------------------

// L^p norm of grid samples with the box measure; p may be infinity.
Scalar lp_norm(const PhysicalArray& values, Scalar p, const TorusGrid& grid);

// Pointwise Frobenius magnitude of the order-th derivative tensor of f.
PhysicalArray derivative_magnitude(const ScalarField& f, int order);

struct BernsteinReport {
  int q = 0;
  int order = 0;
  Scalar a = 2;
  Scalar b = 2;
  Scalar lambda = 1;              // 2^q
  Scalar derivative_ratio = 0;    // ||grad^k f||_{L^a} / ||f||_{L^a}
  Scalar derivative_normalized = 0;  // ... / lambda^k
  Scalar cross_ratio = 0;         // ||f||_{L^b} / ||f||_{L^a}
  Scalar cross_normalized = 0;    // ... / lambda^{d (1/a - 1/b)}
};

// Requires f to be supported in the annulus 3/4 2^q <= |k| <= 8/3 2^q.
BernsteinReport bernstein_check(const ScalarField& f, int q, int order, Scalar a, Scalar b);

}  // namespace oldroyd
