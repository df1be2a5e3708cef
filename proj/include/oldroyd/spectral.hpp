// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "oldroyd/field.hpp"

namespace oldroyd {

// ---------------------------------------------------------------------------
// Physical <-> spectral transforms
// ---------------------------------------------------------------------------

// Evaluate a Hermitian coefficient array on the grid. The imaginary part of
// the inverse transform is dropped; its size relative to the real part is
// written to `imag_residual` when requested.
PhysicalArray to_physical(const ArrayXc& coeffs, const TorusGrid& grid, Scalar* imag_residual = nullptr);

// Coefficients of a real grid function, with the Nyquist modes removed.
ArrayXc from_physical(const PhysicalArray& values, const TorusGrid& grid);

// Two Hermitian arrays evaluated with a single complex transform.
void to_physical_pair(const ArrayXc& a, const ArrayXc& b, const TorusGrid& grid, PhysicalArray& pa,
                      PhysicalArray& pb);
void from_physical_pair(const PhysicalArray& pa, const PhysicalArray& pb, const TorusGrid& grid, ArrayXc& a,
                        ArrayXc& b);

// Batched versions: arrays are transformed two at a time.
std::vector<PhysicalArray> physical_all(const std::vector<const ArrayXc*>& coeffs, const TorusGrid& grid);
std::vector<ArrayXc> spectral_all(const std::vector<PhysicalArray>& values, const TorusGrid& grid);

// i k_axis fhat
ArrayXc derivative(const ArrayXc& f, const TorusGrid& grid, int axis);

template <FieldKind K>
std::vector<PhysicalArray> to_physical(const Field<K>& f, Scalar* imag_residual = nullptr);

template <FieldKind K>
Field<K> from_physical(const GridPtr& grid, const std::vector<PhysicalArray>& values);

// ---------------------------------------------------------------------------
// Invariant diagnostics
// ---------------------------------------------------------------------------

// max_k |fhat(-k) - conj fhat(k)| / max_k |fhat(k)|; zero for the zero field.
Scalar hermitian_residual(const ArrayXc& coeffs, const TorusGrid& grid);
template <FieldKind K>
Scalar hermitian_residual(const Field<K>& f);

// max_k |k . uhat(k)| / max_k |uhat(k)|; zero for the zero field.
Scalar divergence_residual(const VectorField& u);

template <FieldKind K>
Scalar mean_mode_magnitude(const Field<K>& f);

// ---------------------------------------------------------------------------
// Fourier multipliers
// ---------------------------------------------------------------------------

template <FieldKind K>
Field<K> dealias(Field<K> f);

template <FieldKind K>
void pin_mean(Field<K>& f);

// uhat = (I - k k^T / |k|^2) fhat, with the k = 0 mode set to zero.
VelocityField leray_project(const VectorField& f);

// D(u) = (grad u + grad u^T) / 2 with (grad u)_ij = d_j u_i.
StressField deformation(const VectorField& u);
// W(u) = (grad u - grad u^T) / 2.
SpinField vorticity(const VectorField& u);
// (div tau)_i = d_j tau_ij.
VectorField div_tensor(const StressField& tau);
VectorField gradient(const ScalarField& f);

// ---------------------------------------------------------------------------
// Pseudo-spectral products (2/3-rule dealiased)
// ---------------------------------------------------------------------------

// g_alpha(tau, grad u) = tau W - W tau - alpha (D tau + tau D).
StressField g_alpha(const StressField& tau, const VelocityField& u, Scalar alpha);

// (u . grad) f, componentwise.
template <FieldKind K>
Field<K> advect(const VelocityField& u, const Field<K>& f);

// Pointwise product of two scalar fields.
ScalarField multiply(const ScalarField& f, const ScalarField& g);

// Pointwise kernels on single d x d matrices; grad_u(i, j) = d_j u_i.
Matrix<> deformation_pointwise(const Matrix<>& grad_u);
Matrix<> vorticity_pointwise(const Matrix<>& grad_u);
Matrix<> g_alpha_pointwise(const Matrix<>& tau, const Matrix<>& grad_u, Scalar alpha);

// ---------------------------------------------------------------------------
// L2 pairing
// ---------------------------------------------------------------------------

struct InnerProduct {
  Scalar value = 0;
  // |Im| / (||f|| ||g||), zero when either field vanishes.
  Scalar imag_residual = 0;
};

// Parseval evaluation of (f | g) with the Frobenius pairing for tensors.
template <FieldKind K>
InnerProduct inner_product_detail(const Field<K>& f, const Field<K>& g);

template <FieldKind K>
Scalar inner_product_L2(const Field<K>& f, const Field<K>& g) {
  return inner_product_detail(f, g).value;
}

template <FieldKind K>
Scalar l2_norm(const Field<K>& f);

// ||grad u||_{L2} over all entries d_j u_i.
Scalar gradient_l2_norm(const VectorField& u);

}  // namespace oldroyd
