// SPDX-License-Identifier: Apache-2.0
// Reference computations that do not go through the library's spectral path.
#pragma once

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <vector>

#include "oldroyd/field.hpp"
#include "oldroyd/params.hpp"

namespace oracle {

using oldroyd::Complex;
using oldroyd::Index;
using oldroyd::Scalar;

// Values of the cutoff at r = 1, evaluated in 30-digit arithmetic.
inline constexpr Scalar kChiAtOne = 0.641834045088731020440034055495;
inline constexpr Scalar kPhiAtOne = 0.358165954911268979559965944505;

// Direct evaluation of a (truncated) Fourier series at a grid point.
template <oldroyd::FieldKind K>
Scalar evaluate(const oldroyd::Field<K>& f, int comp, Index point) {
  const auto& g = f.grid();
  std::complex<long double> acc = 0;
  for (Index k = 0; k < g.size(); ++k) {
    const Complex c = f[comp](k);
    if (c == Complex(0)) continue;
    long double phase = 0;
    for (int a = 0; a < g.dim(); ++a)
      phase += static_cast<long double>(g.wavenumber(a)(k)) * static_cast<long double>(g.coordinate(point, a));
    acc += std::complex<long double>(c.real(), c.imag()) * std::polar(1.0L, phase);
  }
  return static_cast<Scalar>(acc.real());
}

// Full generator on (uhat_0..uhat_{d-1}, tauhat_ij for all i, j) for wavevector k.
inline Eigen::MatrixXcd full_generator(const Eigen::VectorXd& k, const oldroyd::FluidParams& p) {
  const int d = static_cast<int>(k.size());
  const int dof = d + d * d;
  const Scalar k2 = k.squaredNorm();
  const Complex I(0, 1);
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(d, d) - k * k.transpose() / k2;
  Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(dof, dof);
  auto T = [d](int i, int j) { return d + i * d + j; };
  for (int i = 0; i < d; ++i) {
    L(i, i) = -(1 - p.omega) * k2 / p.re;
    // (i/Re) sum_l P_il sum_j tau_lj k_j
    for (int l = 0; l < d; ++l)
      for (int j = 0; j < d; ++j) L(i, T(l, j)) += I * P(i, l) * k(j) / p.re;
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      L(T(i, j), T(i, j)) = -1.0 / p.we;
      L(T(i, j), j) += I * p.omega * k(i) / p.we;
      L(T(i, j), i) += I * p.omega * k(j) / p.we;
    }
  return L;
}

inline Eigen::MatrixXcd full_propagator(const Eigen::VectorXd& k, Scalar dt, const oldroyd::FluidParams& p) {
  const Eigen::MatrixXcd A = dt * full_generator(k, p);
  return A.exp();
}

// exp(t A) for a diagonalizable 2x2 matrix through its eigen decomposition.
inline Eigen::Matrix2cd eig_exp(const Eigen::Matrix2cd& a, Scalar t) {
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(a);
  const Eigen::Matrix2cd V = es.eigenvectors();
  Eigen::Matrix2cd D = Eigen::Matrix2cd::Zero();
  for (int i = 0; i < 2; ++i) D(i, i) = std::exp(t * es.eigenvalues()(i));
  return V * D * V.inverse();
}

// Composite 8-point Gauss-Legendre rule on [a, b] with `panels` panels.
template <class F>
Scalar integrate(F&& f, Scalar a, Scalar b, int panels = 2000) {
  static const Scalar x[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
  static const Scalar w[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
  const Scalar h = (b - a) / panels;
  long double acc = 0;
  for (int p = 0; p < panels; ++p) {
    const Scalar c = a + (p + 0.5) * h;
    for (int i = 0; i < 4; ++i) acc += w[i] * (f(c - 0.5 * h * x[i]) + f(c + 0.5 * h * x[i]));
  }
  return static_cast<Scalar>(acc * 0.5 * h);
}

}  // namespace oracle
