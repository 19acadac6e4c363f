#pragma once

#include "unionbound/core.hpp"

namespace unionbound {
namespace detail {

template <class Scalar>
struct FloorSnap {
  long k = 0;
  Scalar frac = 0;  // x - k, zero when x snapped to an integer
};

// floor with a snap guard: a value within tol of an integer is treated as
// that integer, so 2.9999999999998 floors to 3 rather than 2.
template <class Scalar>
FloorSnap<Scalar> floor_with_snap(Scalar x, Scalar tol = Scalar(kInternalTolerance)) {
  const Scalar r = std::round(x);
  if (std::abs(x - r) <= tol) return {static_cast<long>(r), Scalar(0)};
  const Scalar f = std::floor(x);
  return {static_cast<long>(f), x - f};
}

}  // namespace detail

// P(union) <= theta1.
template <class Scalar>
BoundResult<Scalar> union_upper(const MomentSummary<Scalar>& ms) {
  return make_bound_result<Scalar>("union", Direction::upper, ms.theta1);
}

// P(union) >= theta1 - theta2. Can go negative; the raw value is kept and
// flagged clamped.
template <class Scalar>
BoundResult<Scalar> bonferroni_lower(const MomentSummary<Scalar>& ms) {
  return make_bound_result<Scalar>("bonferroni", Direction::lower, ms.theta1 - ms.theta2);
}

// P(union) >= theta1 / N: some event index must carry at least the average.
template <class Scalar>
BoundResult<Scalar> frac_lower(const MomentSummary<Scalar>& ms) {
  return make_bound_result<Scalar>("frac", Direction::lower,
                                   ms.theta1 / Scalar(ms.size()));
}

// P(union) >= max_i alpha_i.
template <class Scalar>
BoundResult<Scalar> max_lower(const MomentSummary<Scalar>& ms) {
  return make_bound_result<Scalar>("max", Direction::lower, ms.alpha.maxCoeff());
}

// Cauchy-Schwarz on the degree spectrum: theta1^2 / (2 theta2 + theta1).
// Zero by convention when theta1 <= 0.
template <class Scalar>
BoundResult<Scalar> cs_lower(const MomentSummary<Scalar>& ms) {
  if (!(ms.theta1 > Scalar(0)))
    return make_bound_result<Scalar>("cs", Direction::lower, Scalar(0));
  const Scalar value = ms.theta1 * ms.theta1 / (Scalar(2) * ms.theta2 + ms.theta1);
  return make_bound_result<Scalar>("cs", Direction::lower, value);
}

// Two-point-support lower bound: with kappa the fractional part of
// 2 theta2 / theta1, the optimum splits mass over the adjacent degrees
// floor(2 theta2/theta1) + 1 and + 2, giving
//   kappa theta1^2 / ((2 - kappa) theta1 + 2 theta2)
//   + (1 - kappa) theta1^2 / ((1 - kappa) theta1 + 2 theta2).
template <class Scalar>
BoundResult<Scalar> ds_lower(const MomentSummary<Scalar>& ms) {
  if (ms.theta2 < Scalar(0))
    throw std::invalid_argument("ds bound requires theta2 >= 0");
  if (!(ms.theta1 > Scalar(0)))
    return make_bound_result<Scalar>("ds", Direction::lower, Scalar(0));
  const auto fs = detail::floor_with_snap(Scalar(2) * ms.theta2 / ms.theta1);
  const Scalar kappa = fs.frac;
  const Scalar t1 = ms.theta1, t2 = ms.theta2;
  const Scalar value =
      kappa * t1 * t1 / ((Scalar(2) - kappa) * t1 + Scalar(2) * t2) +
      (Scalar(1) - kappa) * t1 * t1 / ((Scalar(1) - kappa) * t1 + Scalar(2) * t2);
  auto r = make_bound_result<Scalar>("ds", Direction::lower, value);
  r.detail = SupportPair{static_cast<int>(fs.k + 1), static_cast<int>(fs.k + 2)};
  return r;
}

// Per-event quadratic bound: sum_i alpha_i^2 / gamma_i, skipping events
// with alpha_i = 0.
template <class Scalar>
BoundResult<Scalar> dc_lower(const MomentSummary<Scalar>& ms) {
  Scalar value = 0;
  for (Eigen::Index i = 0; i < ms.size(); ++i)
    if (ms.alpha[i] > Scalar(0)) value += ms.alpha[i] * ms.alpha[i] / ms.gamma[i];
  return make_bound_result<Scalar>("dc", Direction::lower, value);
}

// Per-event two-point-support bound: event i contributes its share of an
// optimally split spectrum, with m = floor(gamma_i / alpha_i) and f the
// fractional remainder:
//   (1/m - f / ((1 + m) m)) alpha_i.
template <class Scalar>
BoundResult<Scalar> kat_lower(const MomentSummary<Scalar>& ms) {
  Scalar value = 0;
  for (Eigen::Index i = 0; i < ms.size(); ++i) {
    const Scalar a = ms.alpha[i];
    if (!(a > Scalar(0))) continue;
    if (ms.gamma[i] < a - Scalar(kUserTolerance))
      throw std::invalid_argument("kat bound requires gamma_i >= alpha_i");
    const Scalar ratio = std::max(ms.gamma[i] / a, Scalar(1));
    const auto fs = detail::floor_with_snap(ratio);
    const Scalar m = Scalar(fs.k);
    value += (Scalar(1) / m - fs.frac / ((Scalar(1) + m) * m)) * a;
  }
  return make_bound_result<Scalar>("kat", Direction::lower, value);
}

// Degree-spectrum upper bound: theta1 - 2 theta2 / N.
template <class Scalar>
BoundResult<Scalar> new1_upper(const MomentSummary<Scalar>& ms) {
  const Scalar value = ms.theta1 - Scalar(2) * ms.theta2 / Scalar(ms.size());
  return make_bound_result<Scalar>("new1", Direction::upper, value);
}

}  // namespace unionbound
