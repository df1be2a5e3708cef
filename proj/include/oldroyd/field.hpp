// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "oldroyd/errors.hpp"
#include "oldroyd/grid.hpp"

namespace oldroyd {

enum class FieldKind { Scalar, Vector, SymTensor, SkewTensor };

constexpr int component_count(FieldKind kind, int dim) {
  switch (kind) {
    case FieldKind::Scalar: return 1;
    case FieldKind::Vector: return dim;
    case FieldKind::SymTensor: return dim * (dim + 1) / 2;
    case FieldKind::SkewTensor: return dim * (dim - 1) / 2;
  }
  return 0;
}

constexpr const char* kind_name(FieldKind kind) {
  switch (kind) {
    case FieldKind::Scalar: return "scalar";
    case FieldKind::Vector: return "velocity";
    case FieldKind::SymTensor: return "stress";
    case FieldKind::SkewTensor: return "spin";
  }
  return "";
}

// Upper-triangle storage, row by row: (0,0) (0,1) [(0,2)] (1,1) [(1,2) (2,2)].
constexpr int sym_index(int i, int j, int dim) {
  if (i > j) std::swap(i, j);
  return i * dim - i * (i - 1) / 2 + (j - i);
}

// Strictly-upper storage, row by row: (0,1) [(0,2) (1,2)].
constexpr int skew_index(int i, int j, int dim) {
  return i * (dim - 1) - i * (i - 1) / 2 + (j - i - 1);
}

/// Fourier coefficients of a real field on a TorusGrid, one coefficient array
/// per stored component.
///
/// Symmetric tensors store only the upper triangle, so tau_ij == tau_ji holds
/// by construction; skew tensors store the strictly-upper triangle. Per
/// component, a valid field is Hermitian (fhat(-k) = conj fhat(k)) and has a
/// zero mean mode. Operations preserve both but do not enforce them; use the
/// residual helpers in spectral.hpp to check.
template <FieldKind K>
class Field {
 public:
  static constexpr FieldKind kind = K;

  Field() = default;

  explicit Field(GridPtr grid) : grid_(std::move(grid)) {
    if (!grid_) throw StructuralError("field requires a grid");
    comps_.assign(static_cast<size_t>(component_count(K, grid_->dim())), ArrayXc::Zero(grid_->size()));
  }

  Field(GridPtr grid, std::vector<ArrayXc> comps) : grid_(std::move(grid)), comps_(std::move(comps)) {
    if (!grid_) throw StructuralError("field requires a grid");
    if (static_cast<int>(comps_.size()) != component_count(K, grid_->dim()))
      throw StructuralError("field: wrong number of components");
    for (const auto& c : comps_)
      if (c.size() != grid_->size()) throw StructuralError("field: component size does not match grid");
  }

  const TorusGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  int dim() const { return grid_->dim(); }
  int components() const noexcept { return static_cast<int>(comps_.size()); }
  bool empty() const noexcept { return !grid_; }

  ArrayXc& operator[](int c) { return comps_[static_cast<size_t>(c)]; }
  const ArrayXc& operator[](int c) const { return comps_[static_cast<size_t>(c)]; }

  // Number of full-tensor entries represented by stored component c.
  Scalar multiplicity(int c) const {
    if constexpr (K == FieldKind::SkewTensor) {
      return 2.0;
    } else if constexpr (K == FieldKind::SymTensor) {
      const int d = dim();
      for (int i = 0; i < d; ++i)
        if (sym_index(i, i, d) == c) return 1.0;
      return 2.0;
    } else {
      return 1.0;
    }
  }

  // Full-tensor entry (i, j) as a coefficient array with the correct sign.
  ArrayXc entry(int i, int j) const
    requires(K == FieldKind::SymTensor || K == FieldKind::SkewTensor)
  {
    const int d = dim();
    if constexpr (K == FieldKind::SymTensor) {
      return comps_[static_cast<size_t>(sym_index(i, j, d))];
    } else {
      if (i == j) return ArrayXc::Zero(grid_->size());
      if (i < j) return comps_[static_cast<size_t>(skew_index(i, j, d))];
      return -comps_[static_cast<size_t>(skew_index(j, i, d))];
    }
  }

  void set_zero() {
    for (auto& c : comps_) c.setZero();
  }

  Field& operator+=(const Field& o) {
    check_same(o);
    for (size_t c = 0; c < comps_.size(); ++c) comps_[c] += o.comps_[c];
    return *this;
  }
  Field& operator-=(const Field& o) {
    check_same(o);
    for (size_t c = 0; c < comps_.size(); ++c) comps_[c] -= o.comps_[c];
    return *this;
  }
  Field& operator*=(Scalar a) {
    for (auto& c : comps_) c *= a;
    return *this;
  }

  // this += a * o
  Field& axpy(Scalar a, const Field& o) {
    check_same(o);
    for (size_t c = 0; c < comps_.size(); ++c) comps_[c] += a * o.comps_[c];
    return *this;
  }

  // Multiply every component by a real Fourier multiplier.
  Field& apply_multiplier(const ArrayXs& m) {
    for (auto& c : comps_) c *= m;
    return *this;
  }

  void check_same(const Field& o) const {
    if (!grid_ || !o.grid_) throw StructuralError("operation on an empty field");
    if (!(*grid_ == *o.grid_)) throw StructuralError("fields live on different grids");
  }

 private:
  GridPtr grid_;
  std::vector<ArrayXc> comps_;
};

template <FieldKind K>
Field<K> operator+(Field<K> a, const Field<K>& b) {
  a += b;
  return a;
}
template <FieldKind K>
Field<K> operator-(Field<K> a, const Field<K>& b) {
  a -= b;
  return a;
}
template <FieldKind K>
Field<K> operator*(Scalar s, Field<K> a) {
  a *= s;
  return a;
}

using ScalarField = Field<FieldKind::Scalar>;
using VectorField = Field<FieldKind::Vector>;
using StressField = Field<FieldKind::SymTensor>;
using SpinField = Field<FieldKind::SkewTensor>;

// Velocity is a vector field carrying the divergence-free invariant.
using VelocityField = VectorField;

inline void require_same_grid(const TorusGrid& a, const TorusGrid& b) {
  if (!(a == b)) throw StructuralError("fields live on different grids");
}

}  // namespace oldroyd
