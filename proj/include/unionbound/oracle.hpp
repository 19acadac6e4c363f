#pragma once

#include "unionbound/core.hpp"

#include <map>
#include <numeric>

namespace unionbound {

// Linear program over a degree spectrum a(1..N) >= 0:
//   minimize sum_k w(k) a(k)
//   subject to sum_k k a(k) = m1 and sum_k k^2 a(k) = m2.
// Empty objective_weights means w(k) = 1 for all k.
template <class Scalar = double>
struct TwoMomentInstance {
  Scalar m1 = 0;
  Scalar m2 = 0;
  int n = 0;
  VectorX<Scalar> objective_weights;  // w(k) at index k - 1
};

template <class Scalar = double>
struct TwoMomentSolution {
  Scalar value = 0;
  std::map<int, Scalar> support;  // k -> a(k), strictly positive entries only
};

inline constexpr double kFeasibilitySlack = 1e-9;

namespace detail {

// Basic feasible solutions of a two-equality LP live on supports of size at
// most two; with moment maps u(k) = k^s and v(k) = k^(s+1) every support pair
// has a positive determinant, so enumerating singletons and pairs visits
// every vertex. Ties keep the first candidate in enumeration order
// (singletons by k, then pairs lexicographically).
template <class Scalar, class WeightFn>
TwoMomentSolution<Scalar> moment_pair_min(Scalar m1, Scalar m2, int n, int s,
                                          WeightFn weight) {
  if (n < 1) throw std::invalid_argument("support limit must be at least 1");
  if (!(m1 > Scalar(0))) throw std::invalid_argument("first moment must be positive");
  const Scalar slack = Scalar(kFeasibilitySlack);
  if (m2 < m1 - slack || m2 > Scalar(n) * m1 + slack)
    throw std::invalid_argument("moments are infeasible for the support limit");

  auto snap = [](Scalar a) {
    return (a > Scalar(-kInternalTolerance) && a < Scalar(0)) ? Scalar(0) : a;
  };
  auto uk = [s](int k) { return s == 0 ? Scalar(1) : Scalar(k); };
  auto vk = [s](int k) { return s == 0 ? Scalar(k) : Scalar(k) * Scalar(k); };

  bool found = false;
  TwoMomentSolution<Scalar> best;
  auto consider = [&](Scalar value, std::map<int, Scalar> support) {
    if (!found || value < best.value) {
      found = true;
      best.value = value;
      best.support = std::move(support);
    }
  };

  for (int k = 1; k <= n; ++k) {
    const Scalar a = snap(m1 / uk(k));
    if (a < Scalar(0)) continue;
    if (std::abs(vk(k) * a - m2) > slack) continue;
    std::map<int, Scalar> support;
    if (a > Scalar(0)) support[k] = a;
    consider(weight(k) * a, std::move(support));
  }
  for (int k1 = 1; k1 <= n; ++k1) {
    for (int k2 = k1 + 1; k2 <= n; ++k2) {
      const Scalar u1 = uk(k1), u2 = uk(k2), v1 = vk(k1), v2 = vk(k2);
      const Scalar det = u1 * v2 - u2 * v1;
      const Scalar a1 = snap((m1 * v2 - m2 * u2) / det);
      const Scalar a2 = snap((u1 * m2 - v1 * m1) / det);
      if (a1 < Scalar(0) || a2 < Scalar(0)) continue;
      std::map<int, Scalar> support;
      if (a1 > Scalar(0)) support[k1] = a1;
      if (a2 > Scalar(0)) support[k2] = a2;
      consider(weight(k1) * a1 + weight(k2) * a2, std::move(support));
    }
  }
  if (!found) throw std::runtime_error("no feasible support found");
  return best;
}

}  // namespace detail

template <class Scalar>
TwoMomentSolution<Scalar> two_moment_min(const TwoMomentInstance<Scalar>& inst) {
  if (inst.objective_weights.size() != 0 && inst.objective_weights.size() != inst.n)
    throw std::invalid_argument("objective weights must have one entry per degree");
  auto weight = [&inst](int k) {
    return inst.objective_weights.size() == 0 ? Scalar(1)
                                              : inst.objective_weights[k - 1];
  };
  return detail::moment_pair_min<Scalar>(inst.m1, inst.m2, inst.n, 1, weight);
}

// Per-event subproblem: minimize sum_k a(k)/k subject to sum_k a(k) = alpha_i
// and sum_k k a(k) = gamma_i over a(1..N) >= 0.
template <class Scalar>
TwoMomentSolution<Scalar> kat_subproblem_min(Scalar alpha_i, Scalar gamma_i, int n) {
  if (alpha_i < Scalar(0))
    throw std::invalid_argument("alpha_i must be non-negative");
  if (alpha_i == Scalar(0)) {
    if (std::abs(gamma_i) > Scalar(kFeasibilitySlack))
      throw std::invalid_argument("gamma_i must vanish with alpha_i");
    return {};
  }
  return detail::moment_pair_min<Scalar>(
      alpha_i, gamma_i, n, 0, [](int k) { return Scalar(1) / Scalar(k); });
}

// Realizes the optimal two-point degree spectrum for (theta1, theta2, N) as
// a nested event system: with support degrees ka <= kb, the first ka events
// contain both atoms and events ka..kb-1 contain only the second, so atom
// degrees are exactly ka and kb and the summary moments are preserved.
template <class Scalar>
EventSystem<Scalar> construct_ds_achiever(const MomentSummary<Scalar>& ms) {
  if (!(ms.theta1 > Scalar(0)))
    throw std::invalid_argument("achiever construction requires theta1 > 0");
  TwoMomentInstance<Scalar> inst;
  inst.m1 = ms.theta1;
  inst.m2 = Scalar(2) * ms.theta2 + ms.theta1;
  inst.n = static_cast<int>(ms.size());
  const auto sol = two_moment_min(inst);
  Scalar total = 0;
  for (const auto& [k, a] : sol.support) total += a;
  if (total > Scalar(1) + Scalar(kUserTolerance))
    throw std::invalid_argument("summary is not realizable: support mass exceeds one");
  const Eigen::Index m = static_cast<Eigen::Index>(sol.support.size());
  VectorX<Scalar> masses(m);
  BoolMatrix memb = BoolMatrix::Constant(ms.size(), m, false);
  Eigen::Index col = 0;
  for (const auto& [k, a] : sol.support) {  // std::map iterates by ascending k
    masses[col] = a;
    for (int i = 0; i < k; ++i) memb(i, col) = true;
    ++col;
  }
  return EventSystem<Scalar>(std::move(masses), std::move(memb));
}

// One atom of mass theta1 / n shared by all n events: attains the average
// lower bound with equality.
template <class Scalar>
EventSystem<Scalar> construct_frac_achiever(Scalar theta1, int n) {
  if (n < 1) throw std::invalid_argument("need at least one event");
  if (theta1 < Scalar(0) || theta1 > Scalar(n) + Scalar(kInternalTolerance))
    throw std::invalid_argument("theta1 must lie in [0, n]");
  VectorX<Scalar> masses(1);
  masses[0] = theta1 / Scalar(n);
  BoolMatrix memb = BoolMatrix::Constant(n, 1, true);
  return EventSystem<Scalar>(std::move(masses), std::move(memb));
}

// Nested chain attaining max_i alpha_i: with events ordered by descending
// probability, atom t carries the mass step between ranks t and t+1 and is
// shared by the t+1 largest events, so each event recovers its alpha and
// the union equals the maximum.
template <class Scalar>
EventSystem<Scalar> construct_max_achiever(const VectorX<Scalar>& alpha) {
  const Eigen::Index n = alpha.size();
  if (n < 1) throw std::invalid_argument("need at least one event");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(alpha[i] >= Scalar(0)) || alpha[i] > Scalar(1) + Scalar(kInternalTolerance))
      throw std::invalid_argument("alpha entries must lie in [0, 1]");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&alpha](int a, int b) { return alpha[a] > alpha[b]; });
  VectorX<Scalar> masses(n);
  BoolMatrix memb = BoolMatrix::Constant(n, n, false);
  for (Eigen::Index t = 0; t < n; ++t) {
    const Scalar next = (t + 1 < n) ? alpha[order[t + 1]] : Scalar(0);
    masses[t] = alpha[order[t]] - next;
    for (Eigen::Index r = 0; r <= t; ++r) memb(order[r], t) = true;
  }
  return EventSystem<Scalar>(std::move(masses), std::move(memb));
}

}  // namespace unionbound
