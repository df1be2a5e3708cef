// SPDX-License-Identifier: Apache-2.0
#include "oldroyd/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace oldroyd {

namespace {

void zero_nyquist(ArrayXc& a, const TorusGrid& grid) { a *= grid.resolved_mask(); }

}  // namespace

ArrayXc derivative(const ArrayXc& f, const TorusGrid& grid, int axis) {
  return kI * grid.wavenumber(axis) * f;
}

std::vector<PhysicalArray> physical_all(const std::vector<const ArrayXc*>& coeffs, const TorusGrid& grid) {
  std::vector<PhysicalArray> out(coeffs.size());
  size_t c = 0;
  for (; c + 1 < coeffs.size(); c += 2) to_physical_pair(*coeffs[c], *coeffs[c + 1], grid, out[c], out[c + 1]);
  if (c < coeffs.size()) out[c] = to_physical(*coeffs[c], grid);
  return out;
}

std::vector<ArrayXc> spectral_all(const std::vector<PhysicalArray>& values, const TorusGrid& grid) {
  std::vector<ArrayXc> out(values.size());
  size_t c = 0;
  for (; c + 1 < values.size(); c += 2) from_physical_pair(values[c], values[c + 1], grid, out[c], out[c + 1]);
  if (c < values.size()) out[c] = from_physical(values[c], grid);
  return out;
}

namespace {

// Physical grad u with G[i][j] = d_j u_i.
std::vector<std::vector<PhysicalArray>> physical_gradient(const VectorField& u) {
  const TorusGrid& grid = u.grid();
  const int d = grid.dim();
  std::vector<ArrayXc> derivs;
  derivs.reserve(static_cast<size_t>(d * d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) derivs.push_back(derivative(u[i], grid, j));
  std::vector<const ArrayXc*> ptrs;
  for (const auto& a : derivs) ptrs.push_back(&a);
  auto flat = physical_all(ptrs, grid);
  std::vector<std::vector<PhysicalArray>> g(static_cast<size_t>(d), std::vector<PhysicalArray>(static_cast<size_t>(d)));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g[i][j] = std::move(flat[static_cast<size_t>(i * d + j)]);
  return g;
}

}  // namespace

PhysicalArray to_physical(const ArrayXc& coeffs, const TorusGrid& grid, Scalar* imag_residual) {
  ArrayXc phys;
  grid.inverse(coeffs, phys);
  if (imag_residual) {
    const Scalar re = phys.real().abs().maxCoeff();
    const Scalar im = phys.imag().abs().maxCoeff();
    *imag_residual = re > 0 ? im / re : im;
  }
  return phys.real();
}

ArrayXc from_physical(const PhysicalArray& values, const TorusGrid& grid) {
  if (values.size() != grid.size()) throw StructuralError("physical array size does not match grid");
  ArrayXc phys = values.cast<Complex>();
  ArrayXc spec;
  grid.forward(phys, spec);
  // Hermitian part only; removes the odd rounding of the complex transform.
  ArrayXc herm(spec.size());
  const auto& neg = grid.negative_map();
  for (Index k = 0; k < spec.size(); ++k) herm(k) = 0.5 * (spec(k) + std::conj(spec(neg[static_cast<size_t>(k)])));
  zero_nyquist(herm, grid);
  return herm;
}

void to_physical_pair(const ArrayXc& a, const ArrayXc& b, const TorusGrid& grid, PhysicalArray& pa,
                      PhysicalArray& pb) {
  ArrayXc z = a + kI * b;
  ArrayXc phys;
  grid.inverse(z, phys);
  pa = phys.real();
  pb = phys.imag();
}

void from_physical_pair(const PhysicalArray& pa, const PhysicalArray& pb, const TorusGrid& grid, ArrayXc& a,
                        ArrayXc& b) {
  if (pa.size() != grid.size() || pb.size() != grid.size())
    throw StructuralError("physical array size does not match grid");
  ArrayXc z(grid.size());
  z.real() = pa;
  z.imag() = pb;
  ArrayXc spec;
  grid.forward(z, spec);
  a.resize(grid.size());
  b.resize(grid.size());
  const auto& neg = grid.negative_map();
  for (Index k = 0; k < spec.size(); ++k) {
    const Complex zm = std::conj(spec(neg[static_cast<size_t>(k)]));
    a(k) = 0.5 * (spec(k) + zm);
    b(k) = Complex(0.0, -0.5) * (spec(k) - zm);
  }
  zero_nyquist(a, grid);
  zero_nyquist(b, grid);
}

template <FieldKind K>
std::vector<PhysicalArray> to_physical(const Field<K>& f, Scalar* imag_residual) {
  std::vector<PhysicalArray> out;
  Scalar worst = 0;
  for (int c = 0; c < f.components(); ++c) {
    Scalar r = 0;
    out.push_back(to_physical(f[c], f.grid(), imag_residual ? &r : nullptr));
    worst = std::max(worst, r);
  }
  if (imag_residual) *imag_residual = worst;
  return out;
}

template <FieldKind K>
Field<K> from_physical(const GridPtr& grid, const std::vector<PhysicalArray>& values) {
  if (static_cast<int>(values.size()) != component_count(K, grid->dim()))
    throw StructuralError("from_physical: wrong number of components");
  return Field<K>(grid, spectral_all(values, *grid));
}

Scalar hermitian_residual(const ArrayXc& coeffs, const TorusGrid& grid) {
  const Scalar scale = coeffs.abs().maxCoeff();
  if (scale == 0) return 0;
  Scalar worst = 0;
  const auto& neg = grid.negative_map();
  for (Index k = 0; k < coeffs.size(); ++k)
    worst = std::max(worst, std::abs(coeffs(neg[static_cast<size_t>(k)]) - std::conj(coeffs(k))));
  return worst / scale;
}

template <FieldKind K>
Scalar hermitian_residual(const Field<K>& f) {
  Scalar worst = 0;
  for (int c = 0; c < f.components(); ++c) worst = std::max(worst, hermitian_residual(f[c], f.grid()));
  return worst;
}

Scalar divergence_residual(const VectorField& u) {
  const TorusGrid& grid = u.grid();
  ArrayXc div = ArrayXc::Zero(grid.size());
  Scalar scale = 0;
  for (int a = 0; a < grid.dim(); ++a) {
    div += grid.wavenumber(a) * u[a];
    scale = std::max(scale, u[a].abs().maxCoeff());
  }
  if (scale == 0) return 0;
  return div.abs().maxCoeff() / scale;
}

template <FieldKind K>
Scalar mean_mode_magnitude(const Field<K>& f) {
  Scalar worst = 0;
  for (int c = 0; c < f.components(); ++c) worst = std::max(worst, std::abs(f[c](0)));
  return worst;
}

template <FieldKind K>
Field<K> dealias(Field<K> f) {
  f.apply_multiplier(f.grid().dealias_mask());
  return f;
}

template <FieldKind K>
void pin_mean(Field<K>& f) {
  for (int c = 0; c < f.components(); ++c) f[c](0) = 0.0;
}

VelocityField leray_project(const VectorField& f) {
  const TorusGrid& grid = f.grid();
  const int d = grid.dim();
  const ArrayXs& k2 = grid.k_squared();
  ArrayXs inv_k2 = (k2 > 0).select(k2.inverse(), 0.0);
  ArrayXc kdotf = ArrayXc::Zero(grid.size());
  for (int a = 0; a < d; ++a) kdotf += grid.wavenumber(a) * f[a];
  kdotf *= inv_k2;
  VelocityField out(f.grid_ptr());
  for (int a = 0; a < d; ++a) {
    out[a] = f[a] - grid.wavenumber(a) * kdotf;
    out[a](0) = 0.0;
  }
  return out;
}

StressField deformation(const VectorField& u) {
  const TorusGrid& grid = u.grid();
  const int d = grid.dim();
  StressField out(u.grid_ptr());
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j)
      out[sym_index(i, j, d)] = Complex(0.0, 0.5) * (grid.wavenumber(j) * u[i] + grid.wavenumber(i) * u[j]);
  return out;
}

SpinField vorticity(const VectorField& u) {
  const TorusGrid& grid = u.grid();
  const int d = grid.dim();
  SpinField out(u.grid_ptr());
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      out[skew_index(i, j, d)] = Complex(0.0, 0.5) * (grid.wavenumber(j) * u[i] - grid.wavenumber(i) * u[j]);
  return out;
}

VectorField div_tensor(const StressField& tau) {
  const TorusGrid& grid = tau.grid();
  const int d = grid.dim();
  VectorField out(tau.grid_ptr());
  for (int i = 0; i < d; ++i) {
    ArrayXc acc = ArrayXc::Zero(grid.size());
    for (int j = 0; j < d; ++j) acc += grid.wavenumber(j) * tau[sym_index(i, j, d)];
    out[i] = kI * acc;
  }
  return out;
}

VectorField gradient(const ScalarField& f) {
  const TorusGrid& grid = f.grid();
  VectorField out(f.grid_ptr());
  for (int a = 0; a < grid.dim(); ++a) out[a] = derivative(f[0], grid, a);
  return out;
}

StressField g_alpha(const StressField& tau, const VelocityField& u, Scalar alpha) {
  require_same_grid(tau.grid(), u.grid());
  const TorusGrid& grid = tau.grid();
  const int d = grid.dim();
  const auto G = physical_gradient(u);

  std::vector<const ArrayXc*> tptr;
  for (int c = 0; c < tau.components(); ++c) tptr.push_back(&tau[c]);
  const auto tphys = physical_all(tptr, grid);
  auto T = [&](int i, int j) -> const PhysicalArray& { return tphys[static_cast<size_t>(sym_index(i, j, d))]; };

  std::vector<PhysicalArray> out(static_cast<size_t>(tau.components()));
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      PhysicalArray acc = PhysicalArray::Zero(grid.size());
      for (int k = 0; k < d; ++k) {
        // W_kj = (G_kj - G_jk)/2, D_kj = (G_kj + G_jk)/2
        const PhysicalArray Wkj = 0.5 * (G[k][j] - G[j][k]);
        const PhysicalArray Wik = 0.5 * (G[i][k] - G[k][i]);
        const PhysicalArray Dkj = 0.5 * (G[k][j] + G[j][k]);
        const PhysicalArray Dik = 0.5 * (G[i][k] + G[k][i]);
        acc += T(i, k) * Wkj - Wik * T(k, j) - alpha * (Dik * T(k, j) + T(i, k) * Dkj);
      }
      out[static_cast<size_t>(sym_index(i, j, d))] = std::move(acc);
    }
  }
  return dealias(StressField(tau.grid_ptr(), spectral_all(out, grid)));
}

template <FieldKind K>
Field<K> advect(const VelocityField& u, const Field<K>& f) {
  require_same_grid(f.grid(), u.grid());
  const TorusGrid& grid = f.grid();
  const int d = grid.dim();
  std::vector<const ArrayXc*> uptr;
  for (int a = 0; a < d; ++a) uptr.push_back(&u[a]);
  const auto uphys = physical_all(uptr, grid);

  std::vector<ArrayXc> derivs;
  for (int c = 0; c < f.components(); ++c)
    for (int j = 0; j < d; ++j) derivs.push_back(derivative(f[c], grid, j));
  std::vector<const ArrayXc*> dptr;
  for (const auto& a : derivs) dptr.push_back(&a);
  const auto dphys = physical_all(dptr, grid);

  std::vector<PhysicalArray> out(static_cast<size_t>(f.components()));
  for (int c = 0; c < f.components(); ++c) {
    PhysicalArray acc = PhysicalArray::Zero(grid.size());
    for (int j = 0; j < d; ++j) acc += uphys[static_cast<size_t>(j)] * dphys[static_cast<size_t>(c * d + j)];
    out[static_cast<size_t>(c)] = std::move(acc);
  }
  return dealias(Field<K>(f.grid_ptr(), spectral_all(out, grid)));
}

ScalarField multiply(const ScalarField& f, const ScalarField& g) {
  f.check_same(g);
  PhysicalArray pf, pg;
  to_physical_pair(f[0], g[0], f.grid(), pf, pg);
  ScalarField out(f.grid_ptr());
  out[0] = from_physical(PhysicalArray(pf * pg), f.grid());
  return dealias(std::move(out));
}

Matrix<> deformation_pointwise(const Matrix<>& grad_u) { return 0.5 * (grad_u + grad_u.transpose()); }

Matrix<> vorticity_pointwise(const Matrix<>& grad_u) { return 0.5 * (grad_u - grad_u.transpose()); }

Matrix<> g_alpha_pointwise(const Matrix<>& tau, const Matrix<>& grad_u, Scalar alpha) {
  const Matrix<> D = deformation_pointwise(grad_u);
  const Matrix<> W = vorticity_pointwise(grad_u);
  return tau * W - W * tau - alpha * (D * tau + tau * D);
}

template <FieldKind K>
InnerProduct inner_product_detail(const Field<K>& f, const Field<K>& g) {
  f.check_same(g);
  Complex acc = 0;
  Scalar ff = 0;
  Scalar gg = 0;
  for (int c = 0; c < f.components(); ++c) {
    const Scalar m = f.multiplicity(c);
    acc += m * (f[c] * g[c].conjugate()).sum();
    ff += m * f[c].abs2().sum();
    gg += m * g[c].abs2().sum();
  }
  const Scalar vol = f.grid().box_volume();
  InnerProduct r;
  r.value = vol * acc.real();
  const Scalar scale = std::sqrt(ff * gg);
  r.imag_residual = scale > 0 ? std::abs(acc.imag()) / scale : 0.0;
  return r;
}

template <FieldKind K>
Scalar l2_norm(const Field<K>& f) {
  Scalar acc = 0;
  for (int c = 0; c < f.components(); ++c) acc += f.multiplicity(c) * f[c].abs2().sum();
  return std::sqrt(f.grid().box_volume() * acc);
}

Scalar gradient_l2_norm(const VectorField& u) {
  Scalar acc = 0;
  for (int c = 0; c < u.components(); ++c) acc += (u.grid().k_squared() * u[c].abs2()).sum();
  return std::sqrt(u.grid().box_volume() * acc);
}

#define OLDROYD_INSTANTIATE(K)                                                              \
  template std::vector<PhysicalArray> to_physical(const Field<K>&, Scalar*);               \
  template Field<K> from_physical(const GridPtr&, const std::vector<PhysicalArray>&);     \
  template Scalar hermitian_residual(const Field<K>&);                                     \
  template Scalar mean_mode_magnitude(const Field<K>&);                                    \
  template Field<K> dealias(Field<K>);                                                     \
  template void pin_mean(Field<K>&);                                                       \
  template Field<K> advect(const VelocityField&, const Field<K>&);                         \
  template InnerProduct inner_product_detail(const Field<K>&, const Field<K>&);            \
  template Scalar l2_norm(const Field<K>&);

OLDROYD_INSTANTIATE(FieldKind::Scalar)
OLDROYD_INSTANTIATE(FieldKind::Vector)
OLDROYD_INSTANTIATE(FieldKind::SymTensor)
OLDROYD_INSTANTIATE(FieldKind::SkewTensor)

#undef OLDROYD_INSTANTIATE

}  // namespace oldroyd
