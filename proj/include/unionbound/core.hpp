#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace unionbound {

template <class Scalar>
using VectorX = Eigen::VectorX<Scalar>;
template <class Scalar>
using MatrixX = Eigen::MatrixX<Scalar>;
using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Consistency tolerances. User-supplied summaries may come from rounded
// tables; internally computed quantities carry float noise only.
inline constexpr double kUserTolerance = 1e-9;
inline constexpr double kInternalTolerance = 1e-12;

namespace detail {

inline std::string format_significant(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
  return std::string(buf);
}

}  // namespace detail

// Finite probability space: non-negative atom masses whose total may stay
// below one (the remainder lies outside every event), plus an event-by-atom
// incidence matrix. Immutable after construction.
template <class Scalar = double>
struct EventSystem {
  VectorX<Scalar> atom_masses;  // length M
  BoolMatrix membership;        // N x M, (i, w) true iff atom w lies in event i

  EventSystem() = default;

  EventSystem(VectorX<Scalar> masses, BoolMatrix incidence)
      : atom_masses(std::move(masses)), membership(std::move(incidence)) {
    if (membership.rows() < 1)
      throw std::invalid_argument("event system needs at least one event");
    if (membership.cols() != atom_masses.size())
      throw std::invalid_argument("membership columns must match atom count");
    Scalar total = 0;
    for (Eigen::Index w = 0; w < atom_masses.size(); ++w) {
      if (!(atom_masses[w] >= Scalar(0)))
        throw std::invalid_argument("atom masses must be non-negative");
      total += atom_masses[w];
    }
    if (total > Scalar(1) + Scalar(kInternalTolerance))
      throw std::invalid_argument("atom masses must sum to at most one");
  }

  Eigen::Index event_count() const { return membership.rows(); }
  Eigen::Index atom_count() const { return membership.cols(); }
};

// a(k) for k = 1..N: total mass of atoms covered by exactly k events.
template <class Scalar = double>
struct DegreeSpectrum {
  VectorX<Scalar> a;  // a[k-1] = a(k)

  Scalar at_degree(int k) const { return a[k - 1]; }
  Scalar union_mass() const { return a.sum(); }
};

// a_i(k): mass of the part of event i covered by exactly k events.
template <class Scalar = double>
struct PerEventSpectrum {
  MatrixX<Scalar> a;  // (i, k-1) = a_i(k)

  Scalar at(Eigen::Index i, int k) const { return a(i, k - 1); }
};

// Individual and pairwise probabilities plus their row and total
// aggregates; this is the only information the bounds consume.
template <class Scalar = double>
struct MomentSummary {
  VectorX<Scalar> alpha;  // alpha_i = P(A_i), also the diagonal of sigma
  MatrixX<Scalar> sigma;  // sigma_ij = P(A_i and A_j)
  VectorX<Scalar> beta;   // beta_i = sum_{j != i} sigma_ij
  VectorX<Scalar> gamma;  // gamma_i = alpha_i + beta_i
  Scalar theta1 = 0;      // sum_i alpha_i
  Scalar theta2 = 0;      // sum_{i < j} sigma_ij

  Eigen::Index size() const { return alpha.size(); }
};

// Builds a summary from alpha and sigma exactly as given; whether the pair
// is mutually consistent is the caller's concern (validate_summary reports,
// it never blocks). theta2 and beta read the upper triangle convention
// sigma_ij with i < j.
template <class Scalar>
MomentSummary<Scalar> make_moment_summary(VectorX<Scalar> alpha, MatrixX<Scalar> sigma) {
  if (alpha.size() < 1)
    throw std::invalid_argument("moment summary needs at least one event");
  if (sigma.rows() != alpha.size() || sigma.cols() != alpha.size())
    throw std::invalid_argument("sigma must be square with one row per event");
  MomentSummary<Scalar> ms;
  const Eigen::Index n = alpha.size();
  ms.beta = sigma.rowwise().sum() - sigma.diagonal();
  ms.gamma = alpha + ms.beta;
  ms.theta1 = alpha.sum();
  ms.theta2 = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) ms.theta2 += sigma(i, j);
  ms.alpha = std::move(alpha);
  ms.sigma = std::move(sigma);
  return ms;
}

template <class Scalar>
Eigen::VectorXi atom_degrees(const EventSystem<Scalar>& es) {
  return es.membership.template cast<int>().colwise().sum().transpose();
}

template <class Scalar>
Scalar union_probability(const EventSystem<Scalar>& es) {
  const Eigen::VectorXi deg = atom_degrees(es);
  Scalar p = 0;
  for (Eigen::Index w = 0; w < es.atom_count(); ++w)
    if (deg[w] > 0) p += es.atom_masses[w];
  return p;
}

template <class Scalar>
DegreeSpectrum<Scalar> degree_spectrum(const EventSystem<Scalar>& es) {
  const Eigen::VectorXi deg = atom_degrees(es);
  DegreeSpectrum<Scalar> s;
  s.a = VectorX<Scalar>::Zero(es.event_count());
  for (Eigen::Index w = 0; w < es.atom_count(); ++w)
    if (deg[w] > 0) s.a[deg[w] - 1] += es.atom_masses[w];
  return s;
}

template <class Scalar>
PerEventSpectrum<Scalar> per_event_spectrum(const EventSystem<Scalar>& es) {
  const Eigen::VectorXi deg = atom_degrees(es);
  PerEventSpectrum<Scalar> s;
  s.a = MatrixX<Scalar>::Zero(es.event_count(), es.event_count());
  for (Eigen::Index w = 0; w < es.atom_count(); ++w) {
    if (deg[w] == 0) continue;
    for (Eigen::Index i = 0; i < es.event_count(); ++i)
      if (es.membership(i, w)) s.a(i, deg[w] - 1) += es.atom_masses[w];
  }
  return s;
}

// One pass over the atoms accumulates the full pairwise matrix; the upper
// triangle is mirrored so sigma is symmetric to the last bit.
template <class Scalar>
MomentSummary<Scalar> summarize(const EventSystem<Scalar>& es) {
  const Eigen::Index n = es.event_count();
  MatrixX<Scalar> sigma = MatrixX<Scalar>::Zero(n, n);
  std::vector<Eigen::Index> hits;
  for (Eigen::Index w = 0; w < es.atom_count(); ++w) {
    const Scalar m = es.atom_masses[w];
    if (m == Scalar(0)) continue;
    hits.clear();
    for (Eigen::Index i = 0; i < n; ++i)
      if (es.membership(i, w)) hits.push_back(i);
    for (std::size_t p = 0; p < hits.size(); ++p)
      for (std::size_t q = p; q < hits.size(); ++q) sigma(hits[p], hits[q]) += m;
  }
  sigma.template triangularView<Eigen::StrictlyLower>() = sigma.transpose();
  VectorX<Scalar> alpha = sigma.diagonal();
  return make_moment_summary<Scalar>(std::move(alpha), std::move(sigma));
}

// Advisory consistency check. Returns one message per violated invariant;
// an empty result means the summary is consistent within tol.
template <class Scalar>
std::vector<std::string> validate_summary(const MomentSummary<Scalar>& ms,
                                          Scalar tol = Scalar(kUserTolerance)) {
  std::vector<std::string> out;
  const Eigen::Index n = ms.size();
  auto num = [](Scalar x) { return detail::format_significant(double(x), 6); };
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(ms.alpha[i] >= -tol))
      out.push_back("alpha(" + std::to_string(i) + ") = " + num(ms.alpha[i]) +
                    " is negative");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (!(ms.sigma(i, j) >= -tol))
        out.push_back("sigma(" + std::to_string(i) + "," + std::to_string(j) +
                      ") = " + num(ms.sigma(i, j)) + " is negative");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (!(std::abs(ms.sigma(i, j) - ms.sigma(j, i)) <= tol))
        out.push_back("sigma(" + std::to_string(i) + "," + std::to_string(j) +
                      ") = " + num(ms.sigma(i, j)) + " differs from sigma(" +
                      std::to_string(j) + "," + std::to_string(i) + ") = " +
                      num(ms.sigma(j, i)));
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(std::abs(ms.sigma(i, i) - ms.alpha[i]) <= tol))
      out.push_back("sigma(" + std::to_string(i) + "," + std::to_string(i) +
                    ") = " + num(ms.sigma(i, i)) + " does not match alpha(" +
                    std::to_string(i) + ") = " + num(ms.alpha[i]));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const Scalar cap = std::min(ms.alpha[i], ms.alpha[j]);
      if (ms.sigma(i, j) > cap + tol)
        out.push_back("sigma(" + std::to_string(i) + "," + std::to_string(j) +
                      ") = " + num(ms.sigma(i, j)) +
                      " exceeds min(alpha(" + std::to_string(i) + "), alpha(" +
                      std::to_string(j) + ")) = " + num(cap));
    }
  return out;
}

enum class Direction { lower, upper };

inline const char* to_string(Direction d) {
  return d == Direction::lower ? "lower" : "upper";
}

// Strictly increasing 0-based event indices.
struct IndexSubset {
  std::vector<int> indices;
};

// Undirected edges (i, j) with i < j spanning all events.
struct SpanningTree {
  std::vector<std::pair<int, int>> edges;
};

// Adjacent integer degrees carrying an optimal two-point support.
struct SupportPair {
  int k1 = 0;
  int k2 = 0;
};

// One evaluated bound. value is the raw formula output, never clamped;
// clamped records whether it fell outside [0, 1]. detail carries the
// optimizing certificate where one exists (subset, tree, support pair,
// or coefficient vector).
template <class Scalar = double>
struct BoundResult {
  std::string name;
  Direction direction = Direction::lower;
  Scalar value = 0;
  bool clamped = false;
  std::variant<std::monostate, IndexSubset, SpanningTree, SupportPair, VectorX<Scalar>> detail;

  Scalar clamped_value() const {
    return std::min(Scalar(1), std::max(Scalar(0), value));
  }
};

template <class Scalar>
BoundResult<Scalar> make_bound_result(std::string name, Direction dir, Scalar value) {
  BoundResult<Scalar> r;
  r.name = std::move(name);
  r.direction = dir;
  r.value = value;
  r.clamped = value < Scalar(0) || value > Scalar(1);
  return r;
}

}  // namespace unionbound
