// SPDX-License-Identifier: Apache-2.0
#include "oldroyd/propagator.hpp"

#include <cmath>
#include <map>

namespace oldroyd {

Matrix2c reduced_generator(Scalar k_norm, const FluidParams& p) {
  Matrix2c a;
  a(0, 0) = -(1.0 - p.omega) * k_norm * k_norm / p.re;
  a(0, 1) = kI * (k_norm / p.re);
  a(1, 0) = kI * (p.omega * k_norm / p.we);
  a(1, 1) = -1.0 / p.we;
  return a;
}

Matrix2c expm2(const Matrix2c& a) {
  const Complex m = 0.5 * a.trace();
  Matrix2c b = a;
  b(0, 0) -= m;
  b(1, 1) -= m;
  const Complex delta2 = m * m - a.determinant();
  const Complex delta = std::sqrt(delta2);
  const Matrix2c id = Matrix2c::Identity();
  if (std::abs(delta) < 1e-2) {
    const Complex d2 = delta2;
    const Complex ch = 1.0 + d2 / 2.0 * (1.0 + d2 / 12.0 * (1.0 + d2 / 30.0 * (1.0 + d2 / 56.0 * (1.0 + d2 / 90.0))));
    const Complex sc = 1.0 + d2 / 6.0 * (1.0 + d2 / 20.0 * (1.0 + d2 / 42.0 * (1.0 + d2 / 72.0 * (1.0 + d2 / 110.0))));
    return std::exp(m) * (ch * id + sc * b);
  }
  // Split over the eigenvalues m +- delta so that neither exponential overflows.
  const Complex e1 = std::exp(m + delta);
  const Complex e2 = std::exp(m - delta);
  return 0.5 * (e1 + e2) * id + ((e1 - e2) / (2.0 * delta)) * b;
}

namespace {

// (u, tau) -> E (u, tau) at one mode; M is the reduced block, e = exp(-dt/We).
void propagate_mode(const Scalar* kh, int d, const Matrix2c& M, Scalar e, Complex* u, Complex* t) {
  Complex T[3][3];
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) T[i][j] = t[sym_index(i, j, d)];

  Complex ku = 0;
  for (int i = 0; i < d; ++i) ku += kh[i] * u[i];
  Complex v[3], tk[3];
  Complex ktk = 0;
  for (int i = 0; i < d; ++i) {
    v[i] = u[i] - kh[i] * ku;
    tk[i] = 0;
    for (int j = 0; j < d; ++j) tk[i] += T[i][j] * kh[j];
    ktk += kh[i] * tk[i];
  }
  Complex sigma[3];
  for (int i = 0; i < d; ++i) sigma[i] = tk[i] - kh[i] * ktk;

  const Complex cs = M(1, 1) - e;
  const Complex cv = M(1, 0);
  for (int i = 0; i < d; ++i) u[i] = M(0, 0) * v[i] + M(0, 1) * sigma[i];
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j)
      t[sym_index(i, j, d)] = e * T[i][j] + cs * (kh[i] * sigma[j] + sigma[i] * kh[j]) + cv * (kh[i] * v[j] + v[i] * kh[j]);
}

}  // namespace

MatrixC<> linear_propagator(const Vector<>& k, Scalar dt, const FluidParams& p) {
  const int d = static_cast<int>(k.size());
  if (d != 2 && d != 3) throw StructuralError("linear_propagator: wavevector must have 2 or 3 components");
  const Scalar kn = k.norm();
  if (kn == 0) throw PreconditionError("linear_propagator: k = 0 has no propagator");
  p.validate();
  const Matrix2c M = expm2(dt * reduced_generator(kn, p));
  const Scalar e = std::exp(-dt / p.we);
  Scalar kh[3] = {0, 0, 0};
  for (int i = 0; i < d; ++i) kh[i] = k(i) / kn;

  const int nt = d * (d + 1) / 2;
  const int dof = d + nt;
  MatrixC<> out(dof, dof);
  for (int col = 0; col < dof; ++col) {
    Complex u[3] = {0, 0, 0};
    Complex t[6] = {0, 0, 0, 0, 0, 0};
    if (col < d) u[col] = 1.0;
    else t[col - d] = 1.0;
    propagate_mode(kh, d, M, e, u, t);
    for (int r = 0; r < d; ++r) out(r, col) = u[r];
    for (int r = 0; r < nt; ++r) out(d + r, col) = t[r];
  }
  return out;
}

LinearPropagator::LinearPropagator(const TorusGrid& grid, Scalar dt, const FluidParams& p)
    : dt_(dt), decay_(std::exp(-dt / p.we)), shell_(static_cast<size_t>(grid.size()), -1) {
  p.validate();
  if (!(dt >= 0)) throw PreconditionError("propagator time step must be nonnegative");
  std::map<Scalar, int> index;
  const ArrayXs& k2 = grid.k_squared();
  for (Index idx = 0; idx < grid.size(); ++idx) {
    if (k2(idx) == 0) continue;
    auto [it, inserted] = index.try_emplace(k2(idx), static_cast<int>(blocks_.size()));
    if (inserted) blocks_.push_back(expm2(dt * reduced_generator(std::sqrt(k2(idx)), p)));
    shell_[static_cast<size_t>(idx)] = it->second;
  }
}

void LinearPropagator::apply(VectorField& u, StressField& tau) const {
  require_same_grid(u.grid(), tau.grid());
  const TorusGrid& grid = u.grid();
  if (static_cast<Index>(shell_.size()) != grid.size()) throw StructuralError("propagator built for another grid");
  const int d = grid.dim();
  const int nt = tau.components();
  const ArrayXs& k2 = grid.k_squared();
  for (Index idx = 0; idx < grid.size(); ++idx) {
    const int sh = shell_[static_cast<size_t>(idx)];
    if (sh < 0) {
      for (int i = 0; i < d; ++i) u[i](idx) = 0.0;
      for (int c = 0; c < nt; ++c) tau[c](idx) = 0.0;
      continue;
    }
    const Scalar kn = std::sqrt(k2(idx));
    Scalar kh[3] = {0, 0, 0};
    for (int i = 0; i < d; ++i) kh[i] = grid.wavenumber(i)(idx) / kn;
    Complex uv[3], tv[6];
    for (int i = 0; i < d; ++i) uv[i] = u[i](idx);
    for (int c = 0; c < nt; ++c) tv[c] = tau[c](idx);
    propagate_mode(kh, d, blocks_[static_cast<size_t>(sh)], decay_, uv, tv);
    for (int i = 0; i < d; ++i) u[i](idx) = uv[i];
    for (int c = 0; c < nt; ++c) tau[c](idx) = tv[c];
  }
}

}  // namespace oldroyd
