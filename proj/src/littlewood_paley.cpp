// SPDX-License-Identifier: Apache-2.0
#include "oldroyd/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>

#include "oldroyd/spectral.hpp"

namespace oldroyd {

Scalar smooth_transition(Scalar t) {
  if (t <= 0) return 0.0;
  if (t >= 1) return 1.0;
  const Scalar a = std::exp(-1.0 / t);
  const Scalar b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

Scalar chi(Scalar r) {
  constexpr Scalar lo = 3.0 / 4.0;
  constexpr Scalar hi = 4.0 / 3.0;
  if (r <= lo) return 1.0;
  if (r >= hi) return 0.0;
  return 1.0 - smooth_transition((r - lo) / (hi - lo));
}

Scalar phi(Scalar r) { return chi(0.5 * r) - chi(r); }

// ---------------------------------------------------------------------------

DyadicPartition::DyadicPartition(const TorusGrid& grid) : dim_(grid.dim()) {
  q_min_ = static_cast<int>(std::floor(std::log2(3.0 * grid.k0() / 8.0))) + 1;
  q_max_ = static_cast<int>(std::ceil(std::log2(8.0 / 3.0 * grid.nyquist())));

  const Index size = grid.size();
  lower_ = ArrayX<int>::Zero(size);
  w_lo_ = ArrayXs::Zero(size);
  w_hi_ = ArrayXs::Zero(size);
  radius_ = grid.k_squared().sqrt();

  for (Index idx = 0; idx < size; ++idx) {
    const Scalar r = radius_(idx);
    if (r == 0 || grid.is_nyquist(idx)) {
      lower_(idx) = q_min_;
      continue;
    }
    int lo = static_cast<int>(std::floor(std::log2(3.0 * r / 8.0))) + 1;
    if (phi(std::ldexp(r, -(lo - 1))) > 0) --lo;
    if (phi(std::ldexp(r, -lo)) == 0 && phi(std::ldexp(r, -(lo + 1))) == 0) ++lo;
    lower_(idx) = lo;
    w_lo_(idx) = phi(std::ldexp(r, -lo));
    w_hi_(idx) = phi(std::ldexp(r, -(lo + 1)));
    const int top = w_hi_(idx) > 0 ? lo + 1 : lo;
    if (lo < q_min_ || top > q_max_) throw Error("dyadic partition: mode outside the resolved block range");
  }

  std::vector<Scalar> r2;
  for (Index idx = 0; idx < size; ++idx)
    if (grid.k_squared()(idx) > 0 && !grid.is_nyquist(idx)) r2.push_back(grid.k_squared()(idx));
  std::sort(r2.begin(), r2.end());
  r2.erase(std::unique(r2.begin(), r2.end()), r2.end());
  radii_.reserve(r2.size());
  for (Scalar v : r2) radii_.push_back(std::sqrt(v));
}

ArrayXs DyadicPartition::block_multiplier(int q) const {
  ArrayXs m = ArrayXs::Zero(size());
  for (Index idx = 0; idx < size(); ++idx) {
    if (lower_(idx) == q) m(idx) = w_lo_(idx);
    else if (lower_(idx) + 1 == q) m(idx) = w_hi_(idx);
  }
  return m;
}

ArrayXs DyadicPartition::cutoff_multiplier(int q) const {
  ArrayXs m(size());
  for (Index idx = 0; idx < size(); ++idx) {
    // The mean mode lies outside every block (S'_h convention); Nyquist modes are unresolved.
    const bool active = radius_(idx) > 0 && (w_lo_(idx) > 0 || w_hi_(idx) > 0);
    m(idx) = active ? chi(std::ldexp(radius_(idx), -q)) : 0.0;
  }
  return m;
}

Scalar DyadicPartition::homogeneous_residual() const {
  Scalar worst = 0;
  for (Scalar r : radii_) {
    Scalar sum = 0;
    for (int q = q_min_; q <= q_max_; ++q) sum += phi(std::ldexp(r, -q));
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

Scalar DyadicPartition::inhomogeneous_residual() const {
  Scalar worst = 0;
  std::vector<Scalar> rs = radii_;
  rs.push_back(0.0);
  for (Scalar r : rs) {
    Scalar sum = chi(r);
    for (int q = 0; q <= q_max_; ++q) sum += phi(std::ldexp(r, -q));
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

// ---------------------------------------------------------------------------

template <FieldKind K>
BlockNorms block_norms(const Field<K>& f, const DyadicPartition& part, int order) {
  if (f.grid().size() != part.size()) throw StructuralError("partition built for a different grid");
  const TorusGrid& grid = f.grid();
  ArrayXs energy = ArrayXs::Zero(grid.size());
  for (int c = 0; c < f.components(); ++c) energy += f.multiplicity(c) * f[c].abs2();
  if (order > 0) energy *= grid.k_squared().pow(order);

  std::vector<Scalar> acc(static_cast<size_t>(part.block_count()), 0.0);
  const auto& lower = part.lower_block();
  const auto& wlo = part.lower_weight();
  const auto& whi = part.upper_weight();
  for (Index idx = 0; idx < grid.size(); ++idx) {
    const Scalar e = energy(idx);
    if (e == 0) continue;
    const auto i = static_cast<size_t>(lower(idx) - part.q_min());
    acc[i] += wlo(idx) * wlo(idx) * e;
    if (i + 1 < acc.size()) acc[i + 1] += whi(idx) * whi(idx) * e;
  }
  BlockNorms out;
  out.q_min = part.q_min();
  out.values.resize(acc.size());
  const Scalar vol = grid.box_volume();
  for (size_t i = 0; i < acc.size(); ++i) out.values[i] = std::sqrt(vol * acc[i]);
  return out;
}

void validate(const BesovIndex& idx) {
  if (idx.p != 2) throw UnsupportedIndexError("only p = 2 Besov norms are supported");
  if (!(idx.r == 1 || idx.r == 2 || idx.r == kInfinity))
    throw UnsupportedIndexError("summation exponent r must be 1, 2 or infinity");
}

namespace {
Scalar lr_sum(const std::vector<Scalar>& terms, Scalar r) {
  if (r == kInfinity) {
    Scalar m = 0;
    for (Scalar t : terms) m = std::max(m, t);
    return m;
  }
  if (r == 1) {
    Scalar s = 0;
    for (Scalar t : terms) s += t;
    return s;
  }
  Scalar s = 0;
  for (Scalar t : terms) s += std::pow(t, r);
  return std::pow(s, 1.0 / r);
}
}  // namespace

Scalar besov_from_blocks(const BlockNorms& b, Scalar s, Scalar r) {
  std::vector<Scalar> terms(b.values.size());
  for (size_t i = 0; i < b.values.size(); ++i) {
    const int q = b.q_min + static_cast<int>(i);
    terms[i] = std::exp2(q * s) * b.values[i];
  }
  return lr_sum(terms, r);
}

HybridNorm hybrid_from_blocks(const BlockNorms& b, Scalar s, int dim) {
  HybridNorm h;
  Scalar low2 = 0;
  for (size_t i = 0; i < b.values.size(); ++i) {
    const int q = b.q_min + static_cast<int>(i);
    if (q < 0) {
      const Scalar t = std::exp2(q * s) * b.values[i];
      low2 += t * t;
    } else {
      h.high += std::exp2(q * 0.5 * dim) * b.values[i];
    }
  }
  h.low = std::sqrt(low2);
  h.value = h.low + h.high;
  return h;
}

Scalar split_from_blocks(const BlockNorms& b, Scalar s, Side side) {
  Scalar sum = 0;
  for (size_t i = 0; i < b.values.size(); ++i) {
    const int q = b.q_min + static_cast<int>(i);
    if ((side == Side::Low) == (q < 0)) sum += std::exp2(q * s) * b.values[i];
  }
  return sum;
}

template <FieldKind K>
Scalar besov_norm(const Field<K>& f, const BesovIndex& idx, const DyadicPartition& part) {
  validate(idx);
  return besov_from_blocks(block_norms(f, part), idx.s, idx.r);
}

template <FieldKind K>
Scalar besov_norm(const Field<K>& f, const BesovIndex& idx) {
  validate(idx);
  return besov_norm(f, idx, DyadicPartition(f.grid()));
}

template <FieldKind K>
HybridNorm hybrid_norm(const Field<K>& f, Scalar s, const DyadicPartition& part) {
  return hybrid_from_blocks(block_norms(f, part), s, f.dim());
}

template <FieldKind K>
HybridNorm hybrid_norm(const Field<K>& f, Scalar s) {
  return hybrid_norm(f, s, DyadicPartition(f.grid()));
}

template <FieldKind K>
Scalar split_norm(const Field<K>& f, Scalar s, Side side, const DyadicPartition& part) {
  return split_from_blocks(block_norms(f, part), s, side);
}

template <FieldKind K>
Scalar split_norm(const Field<K>& f, Scalar s, Side side) {
  return split_norm(f, s, side, DyadicPartition(f.grid()));
}

template <FieldKind K>
Scalar sobolev_fourier_norm(const Field<K>& f, Scalar s) {
  const ArrayXs& k2 = f.grid().k_squared();
  const ArrayXs w = (k2 > 0).select(k2.pow(s), 0.0);
  Scalar acc = 0;
  for (int c = 0; c < f.components(); ++c) acc += f.multiplicity(c) * (w * f[c].abs2()).sum();
  return std::sqrt(f.grid().box_volume() * acc);
}

// ---------------------------------------------------------------------------

Scalar time_norm(const std::vector<Scalar>& times, const std::vector<Scalar>& values, Scalar rho) {
  if (times.empty()) throw PreconditionError("time norm of an empty series");
  if (times.size() != values.size()) throw StructuralError("time norm: times and values differ in length");
  if (rho == kInfinity) {
    Scalar m = 0;
    for (Scalar v : values) m = std::max(m, std::abs(v));
    return m;
  }
  if (!(rho >= 1)) throw PreconditionError("time exponent must be >= 1");
  Scalar integral = 0;
  for (size_t i = 1; i < times.size(); ++i) {
    const Scalar a = std::pow(std::abs(values[i - 1]), rho);
    const Scalar b = std::pow(std::abs(values[i]), rho);
    integral += 0.5 * (times[i] - times[i - 1]) * (a + b);
  }
  return std::pow(integral, 1.0 / rho);
}

namespace {
void check_series(const BlockSeries& series) {
  if (series.samples.empty()) throw PreconditionError("empty time series");
  if (series.samples.size() != series.times.size())
    throw StructuralError("time series: times and samples differ in length");
}
}  // namespace

Scalar chemin_lerner_norm(const BlockSeries& series, Scalar rho, const BesovIndex& idx) {
  validate(idx);
  check_series(series);
  int qlo = series.samples.front().q_min;
  int qhi = series.samples.front().q_max();
  for (const auto& b : series.samples) {
    qlo = std::min(qlo, b.q_min);
    qhi = std::max(qhi, b.q_max());
  }
  std::vector<Scalar> terms;
  std::vector<Scalar> values(series.samples.size());
  for (int q = qlo; q <= qhi; ++q) {
    for (size_t i = 0; i < series.samples.size(); ++i) values[i] = series.samples[i].at(q);
    terms.push_back(std::exp2(q * idx.s) * time_norm(series.times, values, rho));
  }
  return lr_sum(terms, idx.r);
}

Scalar classical_time_norm(const BlockSeries& series, Scalar rho, const BesovIndex& idx) {
  validate(idx);
  check_series(series);
  std::vector<Scalar> values(series.samples.size());
  for (size_t i = 0; i < series.samples.size(); ++i) values[i] = besov_from_blocks(series.samples[i], idx.s, idx.r);
  return time_norm(series.times, values, rho);
}

template <FieldKind K>
Scalar chemin_lerner_norm(const std::vector<Scalar>& times, const std::vector<Field<K>>& samples, Scalar rho,
                          const BesovIndex& idx) {
  if (samples.empty()) throw PreconditionError("empty time series");
  const DyadicPartition part(samples.front().grid());
  BlockSeries series;
  series.times = times;
  for (const auto& f : samples) series.samples.push_back(block_norms(f, part));
  return chemin_lerner_norm(series, rho, idx);
}

// ---------------------------------------------------------------------------

template <FieldKind K>
BlockResult<K> dyadic_block(const Field<K>& f, int q, const DyadicPartition& part) {
  BlockResult<K> r{Field<K>(f.grid_ptr()), false};
  if (!part.in_range(q)) {
    r.out_of_range = true;
    return r;
  }
  r.field = f;
  r.field.apply_multiplier(part.block_multiplier(q));
  return r;
}

template <FieldKind K>
BlockResult<K> dyadic_block(const Field<K>& f, int q) {
  return dyadic_block(f, q, DyadicPartition(f.grid()));
}

template <FieldKind K>
BlockResult<K> low_cutoff(const Field<K>& f, int q, const DyadicPartition& part) {
  // S_q is meaningful for q_min <= q <= q_max + 1; outside it is 0 or the
  // identity on resolved modes, returned with the flag set.
  BlockResult<K> r{f, false};
  if (q < part.q_min() || q > part.q_max() + 1) r.out_of_range = true;
  if (q < part.q_min()) {
    r.field.set_zero();
    return r;
  }
  if (q > part.q_max() + 1) {
    r.field.apply_multiplier(f.grid().resolved_mask());
    for (int c = 0; c < r.field.components(); ++c) r.field[c](0) = 0.0;
    return r;
  }
  r.field.apply_multiplier(part.cutoff_multiplier(q));
  return r;
}

template <FieldKind K>
BlockResult<K> low_cutoff(const Field<K>& f, int q) {
  return low_cutoff(f, q, DyadicPartition(f.grid()));
}

ScalarField paraproduct(const ScalarField& f, const ScalarField& g, const DyadicPartition& part) {
  f.check_same(g);
  const TorusGrid& grid = f.grid();
  PhysicalArray acc = PhysicalArray::Zero(grid.size());
  for (int q = part.q_min(); q <= part.q_max(); ++q) {
    const ArrayXs mg = part.block_multiplier(q);
    if ((mg * g[0].abs()).maxCoeff() == 0) continue;
    const ArrayXc low = f[0] * part.cutoff_multiplier(q - 1);
    if (low.abs().maxCoeff() == 0) continue;
    PhysicalArray pf, pg;
    to_physical_pair(low, ArrayXc(g[0] * mg), grid, pf, pg);
    acc += pf * pg;
  }
  ScalarField out(f.grid_ptr());
  out[0] = from_physical(acc, grid);
  return dealias(std::move(out));
}

ScalarField paraproduct(const ScalarField& f, const ScalarField& g) {
  return paraproduct(f, g, DyadicPartition(f.grid()));
}

ScalarField remainder(const ScalarField& f, const ScalarField& g, const DyadicPartition& part) {
  f.check_same(g);
  const TorusGrid& grid = f.grid();
  PhysicalArray acc = PhysicalArray::Zero(grid.size());
  auto block = [&](int q) { return part.in_range(q) ? part.block_multiplier(q) : ArrayXs(ArrayXs::Zero(grid.size())); };
  for (int q = part.q_min(); q <= part.q_max(); ++q) {
    const ArrayXs mf = block(q);
    if ((mf * f[0].abs()).maxCoeff() == 0) continue;
    const ArrayXc near = g[0] * (block(q - 1) + mf + block(q + 1));
    if (near.abs().maxCoeff() == 0) continue;
    PhysicalArray pf, pg;
    to_physical_pair(ArrayXc(f[0] * mf), near, grid, pf, pg);
    acc += pf * pg;
  }
  ScalarField out(f.grid_ptr());
  out[0] = from_physical(acc, grid);
  return dealias(std::move(out));
}

ScalarField remainder(const ScalarField& f, const ScalarField& g) {
  return remainder(f, g, DyadicPartition(f.grid()));
}

StressField commutator(int q, const VelocityField& u, const StressField& tau, const DyadicPartition& part) {
  if (!part.in_range(q)) throw PreconditionError("commutator: block index outside the resolved range");
  const ArrayXs m = part.block_multiplier(q);
  StressField lhs = advect(u, tau);
  lhs.apply_multiplier(m);
  StressField tq = tau;
  tq.apply_multiplier(m);
  return lhs - advect(u, tq);
}

StressField commutator(int q, const VelocityField& u, const StressField& tau) {
  return commutator(q, u, tau, DyadicPartition(u.grid()));
}

// ---------------------------------------------------------------------------

Scalar lp_norm(const PhysicalArray& values, Scalar p, const TorusGrid& grid) {
  if (p == kInfinity) return values.abs().maxCoeff();
  if (!(p >= 1)) throw PreconditionError("integrability exponent must be >= 1");
  return std::pow(values.abs().pow(p).sum() * grid.cell_volume(), 1.0 / p);
}

PhysicalArray derivative_magnitude(const ScalarField& f, int order) {
  const TorusGrid& grid = f.grid();
  const int d = grid.dim();
  if (order < 0) throw PreconditionError("derivative order must be nonnegative");
  if (order == 0) return to_physical(f[0], grid).abs();
  Index tuples = 1;
  for (int i = 0; i < order; ++i) tuples *= d;
  PhysicalArray sum = PhysicalArray::Zero(grid.size());
  for (Index t = 0; t < tuples; ++t) {
    ArrayXc c = f[0];
    Index rest = t;
    for (int i = 0; i < order; ++i) {
      const int axis = static_cast<int>(rest % d);
      rest /= d;
      c *= kI * grid.wavenumber(axis);
    }
    sum += to_physical(c, grid).square();
  }
  return sum.sqrt();
}

BernsteinReport bernstein_check(const ScalarField& f, int q, int order, Scalar a, Scalar b) {
  const TorusGrid& grid = f.grid();
  const Scalar lambda = std::ldexp(1.0, q);
  const Scalar scale = f[0].abs().maxCoeff();
  if (scale == 0) throw PreconditionError("bernstein_check: zero field");
  const ArrayXs r = grid.k_squared().sqrt();
  for (Index idx = 0; idx < grid.size(); ++idx) {
    if (std::abs(f[0](idx)) <= 1e-13 * scale) continue;
    if (r(idx) < 0.75 * lambda * (1 - 1e-12) || r(idx) > 8.0 / 3.0 * lambda * (1 + 1e-12))
      throw PreconditionError("bernstein_check: field is not supported in the block annulus");
  }
  BernsteinReport rep;
  rep.q = q;
  rep.order = order;
  rep.a = a;
  rep.b = b;
  rep.lambda = lambda;
  const PhysicalArray f0 = derivative_magnitude(f, 0);
  const Scalar fa = lp_norm(f0, a, grid);
  const Scalar fb = lp_norm(f0, b, grid);
  const Scalar dfa = lp_norm(derivative_magnitude(f, order), a, grid);
  rep.derivative_ratio = dfa / fa;
  rep.derivative_normalized = rep.derivative_ratio / std::pow(lambda, order);
  const Scalar inv_a = a == kInfinity ? 0.0 : 1.0 / a;
  const Scalar inv_b = b == kInfinity ? 0.0 : 1.0 / b;
  rep.cross_ratio = fb / fa;
  rep.cross_normalized = rep.cross_ratio / std::pow(lambda, grid.dim() * (inv_a - inv_b));
  return rep;
}

#define OLDROYD_INSTANTIATE(K)                                                                              \
  template BlockNorms block_norms(const Field<K>&, const DyadicPartition&, int);                           \
  template Scalar besov_norm(const Field<K>&, const BesovIndex&, const DyadicPartition&);                  \
  template Scalar besov_norm(const Field<K>&, const BesovIndex&);                                          \
  template HybridNorm hybrid_norm(const Field<K>&, Scalar, const DyadicPartition&);                        \
  template HybridNorm hybrid_norm(const Field<K>&, Scalar);                                                \
  template Scalar split_norm(const Field<K>&, Scalar, Side, const DyadicPartition&);                       \
  template Scalar split_norm(const Field<K>&, Scalar, Side);                                               \
  template Scalar sobolev_fourier_norm(const Field<K>&, Scalar);                                           \
  template Scalar chemin_lerner_norm(const std::vector<Scalar>&, const std::vector<Field<K>>&, Scalar,    \
                                     const BesovIndex&);                                                   \
  template BlockResult<K> dyadic_block(const Field<K>&, int, const DyadicPartition&);                      \
  template BlockResult<K> dyadic_block(const Field<K>&, int);                                              \
  template BlockResult<K> low_cutoff(const Field<K>&, int, const DyadicPartition&);                        \
  template BlockResult<K> low_cutoff(const Field<K>&, int);

OLDROYD_INSTANTIATE(FieldKind::Scalar)
OLDROYD_INSTANTIATE(FieldKind::Vector)
OLDROYD_INSTANTIATE(FieldKind::SymTensor)
OLDROYD_INSTANTIATE(FieldKind::SkewTensor)

#undef OLDROYD_INSTANTIATE

}  // namespace oldroyd
