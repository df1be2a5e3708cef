// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <numbers>

#include <Eigen/Dense>

namespace oldroyd {

// All arithmetic is carried out in 64-bit floats.
using Scalar = double;
using Complex = std::complex<Scalar>;
using Index = Eigen::Index;

template <typename T>
using ArrayX = Eigen::Array<T, Eigen::Dynamic, 1>;

using ArrayXs = ArrayX<Scalar>;
using ArrayXc = ArrayX<Complex>;

template <int Rows = Eigen::Dynamic, int Cols = Rows>
using Matrix = Eigen::Matrix<Scalar, Rows, Cols>;

template <int Rows = Eigen::Dynamic, int Cols = Rows>
using MatrixC = Eigen::Matrix<Complex, Rows, Cols>;

template <int Rows = Eigen::Dynamic>
using Vector = Matrix<Rows, 1>;

inline constexpr Scalar kPi = std::numbers::pi_v<Scalar>;
inline constexpr Scalar kTwoPi = 2 * kPi;
inline constexpr Complex kI{0.0, 1.0};

// Physical-space representation of one component: real samples, row-major.
using PhysicalArray = ArrayXs;

}  // namespace oldroyd
