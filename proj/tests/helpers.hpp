// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <functional>

#include "oldroyd/spectral.hpp"

namespace testing {

using namespace oldroyd;

using PointFn = std::function<Scalar(const std::array<Scalar, 3>&)>;

inline PhysicalArray sample(const TorusGrid& g, const PointFn& fn) {
  PhysicalArray v(g.size());
  for (Index i = 0; i < g.size(); ++i) {
    std::array<Scalar, 3> x{0, 0, 0};
    for (int a = 0; a < g.dim(); ++a) x[static_cast<size_t>(a)] = g.coordinate(i, a);
    v(i) = fn(x);
  }
  return v;
}

template <FieldKind K>
Field<K> field_of(const GridPtr& g, const std::vector<PointFn>& fns) {
  std::vector<PhysicalArray> v;
  for (const auto& f : fns) v.push_back(sample(*g, f));
  return from_physical<K>(g, v);
}

inline PointFn zero() {
  return [](const std::array<Scalar, 3>&) { return 0.0; };
}

inline Scalar max_abs_diff(const PhysicalArray& a, const PhysicalArray& b) { return (a - b).abs().maxCoeff(); }

// Single Fourier mode at integer wavevector m with coefficient c (and its conjugate partner).
inline ArrayXc single_mode(const TorusGrid& g, const std::array<int, 3>& m, Complex c) {
  ArrayXc a = ArrayXc::Zero(g.size());
  const Index i = g.flat_index(m);
  a(i) = c;
  a(g.negative(i)) += std::conj(c);
  return a;
}

}  // namespace testing
