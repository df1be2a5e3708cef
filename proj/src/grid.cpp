// SPDX-License-Identifier: Apache-2.0
#include "oldroyd/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "oldroyd/errors.hpp"

namespace oldroyd {

namespace detail {

namespace {
// The FFTW planner is not reentrant; execution on distinct arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct FftPlans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  FftPlans(int dim, int n) {
    std::array<int, 3> dims{n, n, n};
    Index size = 1;
    for (int a = 0; a < dim; ++a) size *= n;
    fftw_complex* in = fftw_alloc_complex(static_cast<size_t>(size));
    fftw_complex* out = fftw_alloc_complex(static_cast<size_t>(size));
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
      forward = fftw_plan_dft(dim, dims.data(), in, out, FFTW_FORWARD, flags);
      backward = fftw_plan_dft(dim, dims.data(), in, out, FFTW_BACKWARD, flags);
    }
    fftw_free(in);
    fftw_free(out);
    if (!forward || !backward) throw Error("FFTW planning failed");
  }

  ~FftPlans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }

  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;
};

}  // namespace detail

namespace {
bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

fftw_complex* as_fftw(const Complex* p) {
  return reinterpret_cast<fftw_complex*>(const_cast<Complex*>(p));
}
}  // namespace

TorusGrid::TorusGrid(int dim, int n, Scalar period) : dim_(dim), n_(n), period_(period) {
  if (dim != 2 && dim != 3) throw PreconditionError("grid dimension must be 2 or 3");
  if (n < 8 || !is_power_of_two(n)) throw PreconditionError("points per axis must be a power of two >= 8");
  if (!(period > 0) || !std::isfinite(period)) throw PreconditionError("period must be positive");

  size_ = 1;
  for (int a = 0; a < dim_; ++a) size_ *= n_;

  for (int a = 0; a < 3; ++a) {
    modes_[a] = ArrayX<int>::Zero(size_);
    k_[a] = ArrayXs::Zero(size_);
  }
  k2_ = ArrayXs::Zero(size_);
  neg_.resize(static_cast<size_t>(size_));
  nyquist_ = ArrayX<int>::Zero(size_);
  mask_ = ArrayXs::Zero(size_);
  resolved_ = ArrayXs::Zero(size_);

  const int cutoff = dealias_cutoff();
  const Scalar kf = k0();
  for (Index idx = 0; idx < size_; ++idx) {
    Index rest = idx;
    std::array<int, 3> m{0, 0, 0};
    for (int a = dim_ - 1; a >= 0; --a) {
      const int i = static_cast<int>(rest % n_);
      rest /= n_;
      m[a] = i < n_ / 2 ? i : i - n_;
    }
    bool nyq = false;
    bool kept = true;
    std::array<int, 3> mneg{0, 0, 0};
    for (int a = 0; a < dim_; ++a) {
      modes_[a](idx) = m[a];
      k_[a](idx) = kf * m[a];
      k2_(idx) += k_[a](idx) * k_[a](idx);
      nyq = nyq || m[a] == -n_ / 2;
      kept = kept && std::abs(m[a]) <= cutoff;
      mneg[a] = m[a] == -n_ / 2 ? m[a] : -m[a];
    }
    nyquist_(idx) = nyq ? 1 : 0;
    resolved_(idx) = nyq ? 0.0 : 1.0;
    mask_(idx) = kept && !nyq ? 1.0 : 0.0;
    neg_[static_cast<size_t>(idx)] = flat_index(mneg);
  }

  plans_ = std::make_shared<detail::FftPlans>(dim_, n_);
}

Scalar TorusGrid::box_volume() const noexcept { return std::pow(period_, dim_); }

Index TorusGrid::flat_index(const std::array<int, 3>& m) const noexcept {
  Index idx = 0;
  for (int a = 0; a < dim_; ++a) {
    const int i = ((m[a] % n_) + n_) % n_;
    idx = idx * n_ + i;
  }
  return idx;
}

Scalar TorusGrid::coordinate(Index idx, int axis) const noexcept {
  Index rest = idx;
  for (int a = dim_ - 1; a > axis; --a) rest /= n_;
  const auto i = static_cast<Scalar>(rest % n_);
  return i * period_ / static_cast<Scalar>(n_);
}

void TorusGrid::forward(const ArrayXc& phys, ArrayXc& spec) const {
  if (phys.size() != size_) throw StructuralError("forward transform: size mismatch");
  if (phys.data() == spec.data()) {
    const ArrayXc copy = phys;
    forward(copy, spec);
    return;
  }
  spec.resize(size_);
  fftw_execute_dft(plans_->forward, as_fftw(phys.data()), as_fftw(spec.data()));
  spec /= static_cast<Scalar>(size_);
}

void TorusGrid::inverse(const ArrayXc& spec, ArrayXc& phys) const {
  if (spec.size() != size_) throw StructuralError("inverse transform: size mismatch");
  if (phys.data() == spec.data()) {
    const ArrayXc copy = spec;
    inverse(copy, phys);
    return;
  }
  phys.resize(size_);
  fftw_execute_dft(plans_->backward, as_fftw(spec.data()), as_fftw(phys.data()));
}

}  // namespace oldroyd
