// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "oldroyd/field.hpp"
#include "oldroyd/params.hpp"

namespace oldroyd {

using Matrix2c = Eigen::Matrix2cd;

// Generator of the reduced per-mode linear system at wavenumber |k|.
//
// For k != 0 write v = uhat (already orthogonal to k) and sigma = P(k) tauhat khat.
// The pair obeys d/dt (v, sigma) = A (v, sigma) with
//   A = [[-(1-omega)|k|^2/Re, i|k|/Re], [i omega |k|/We, -1/We]].
// The part of tauhat outside span{khat (x) w + w (x) khat : w orthogonal to k}
// relaxes as exp(-t/We).
Matrix2c reduced_generator(Scalar k_norm, const FluidParams& p);

// exp(A) for a 2x2 complex matrix, closed form.
Matrix2c expm2(const Matrix2c& a);

// Dense per-mode update map on (uhat_0..uhat_{d-1}, tauhat upper triangle) for wavevector k.
// The velocity input is projected onto k-perp first.
MatrixC<> linear_propagator(const Vector<>& k, Scalar dt, const FluidParams& p);

// Exact linear propagation over a fixed dt for every mode of a grid. One reduced
// exponential is cached per distinct |k|^2.
class LinearPropagator {
 public:
  LinearPropagator(const TorusGrid& grid, Scalar dt, const FluidParams& p);

  Scalar dt() const noexcept { return dt_; }
  // In place. Mean modes are set to zero.
  void apply(VectorField& u, StressField& tau) const;
  std::size_t distinct_shells() const noexcept { return blocks_.size(); }

 private:
  Scalar dt_;
  Scalar decay_;
  std::vector<Matrix2c> blocks_;
  std::vector<int> shell_;  // per flat index; -1 for the mean mode
};

}  // namespace oldroyd
