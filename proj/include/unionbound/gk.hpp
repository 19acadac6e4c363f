#pragma once

#include "unionbound/core.hpp"

namespace unionbound {

// Relative threshold below which an event adds no independent information
// and is skipped, and the hard floor below which the summary is rejected as
// inconsistent (a genuine pairwise matrix is positive semidefinite, so
// residuals are never truly negative).
inline constexpr double kGkSkipTolerance = 1e-10;
inline constexpr double kGkFailTolerance = 1e-6;

// Grows a Cholesky factor of the retained principal submatrix of sigma one
// event at a time, tracking z = L^-1 alpha_retained so the quadratic form
// alpha^T sigma^-1 alpha is always |z|^2. Feeding event n costs one
// triangular solve; its residual alpha_n - |L^-1 beta_n|^2 measures the new
// event's independent mass and decides retention.
template <class Scalar = double>
class SymmetricSolveWorkspace {
 public:
  struct Step {
    Scalar residual = 0;
    Scalar increment = 0;
    bool retained = false;
  };

  explicit SymmetricSolveWorkspace(Eigen::Index max_events,
                                   Scalar skip_tol = Scalar(kGkSkipTolerance),
                                   Scalar fail_tol = Scalar(kGkFailTolerance))
      : chol_(MatrixX<Scalar>::Zero(max_events, max_events)),
        z_(VectorX<Scalar>::Zero(max_events)),
        skip_tol_(skip_tol),
        fail_tol_(fail_tol) {}

  // Residual the next event would have, without committing it.
  Scalar probe_residual(Scalar alpha_n, const VectorX<Scalar>& sigma_retained) const {
    const Eigen::Index k = retained_count();
    if (k == 0) return alpha_n;
    const VectorX<Scalar> y = chol_.topLeftCorner(k, k)
                                  .template triangularView<Eigen::Lower>()
                                  .solve(sigma_retained);
    return alpha_n - y.squaredNorm();
  }

  // sigma_retained holds the intersections of event `original_index` with
  // each retained event, in retention order.
  Step push(int original_index, Scalar alpha_n, const VectorX<Scalar>& sigma_retained) {
    const Eigen::Index k = retained_count();
    VectorX<Scalar> y;
    Scalar residual = alpha_n;
    if (k > 0) {
      y = chol_.topLeftCorner(k, k)
              .template triangularView<Eigen::Lower>()
              .solve(sigma_retained);
      residual -= y.squaredNorm();
    }
    if (residual < -fail_tol_)
      throw std::runtime_error(
          "pairwise matrix is not positive semidefinite: residual " +
          detail::format_significant(double(residual), 6) + " at event " +
          std::to_string(original_index));
    if (residual <= skip_tol_ * std::max(Scalar(1), alpha_n))
      return {residual, Scalar(0), false};
    const Scalar cross = (k > 0) ? y.dot(z_.head(k)) : Scalar(0);
    const Scalar root = std::sqrt(residual);
    const Scalar z_new = (alpha_n - cross) / root;
    if (k > 0) chol_.row(k).head(k) = y.transpose();
    chol_(k, k) = root;
    z_[k] = z_new;
    value_ += z_new * z_new;
    retained_.push_back(original_index);
    return {residual, z_new * z_new, true};
  }

  Scalar value() const { return value_; }
  const std::vector<int>& retained() const { return retained_; }
  Eigen::Index retained_count() const {
    return static_cast<Eigen::Index>(retained_.size());
  }

  // Coefficients solving sigma_RR c_R = alpha_R on the retained set,
  // scattered into a length full_size vector with zeros elsewhere.
  VectorX<Scalar> coefficients(Eigen::Index full_size) const {
    VectorX<Scalar> c = VectorX<Scalar>::Zero(full_size);
    const Eigen::Index k = retained_count();
    if (k == 0) return c;
    const VectorX<Scalar> w = chol_.topLeftCorner(k, k)
                                  .template triangularView<Eigen::Lower>()
                                  .transpose()
                                  .solve(z_.head(k));
    for (Eigen::Index r = 0; r < k; ++r) c[retained_[r]] = w[r];
    return c;
  }

 private:
  MatrixX<Scalar> chol_;
  VectorX<Scalar> z_;
  std::vector<int> retained_;
  Scalar value_ = 0;
  Scalar skip_tol_;
  Scalar fail_tol_;
};

// Diagnostics from one full pass: the bound value, which events were
// retained or skipped, and every residual and value increment in input
// order.
template <class Scalar = double>
struct GkReport {
  Scalar value = 0;
  std::vector<int> retained;
  std::vector<int> skipped;
  std::vector<Scalar> residuals;
  std::vector<Scalar> increments;
};

namespace detail {

template <class Scalar>
VectorX<Scalar> gather_column(const MomentSummary<Scalar>& ms,
                              const std::vector<int>& rows, int col) {
  VectorX<Scalar> out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) out[r] = ms.sigma(rows[r], col);
  return out;
}

template <class Scalar>
GkReport<Scalar> run_quadratic_bound(const MomentSummary<Scalar>& ms,
                                     const std::vector<int>& order,
                                     SymmetricSolveWorkspace<Scalar>& ws) {
  GkReport<Scalar> rep;
  for (int idx : order) {
    const VectorX<Scalar> col = gather_column(ms, ws.retained(), idx);
    const auto step = ws.push(idx, ms.alpha[idx], col);
    rep.residuals.push_back(step.residual);
    rep.increments.push_back(step.increment);
    (step.retained ? rep.retained : rep.skipped).push_back(idx);
  }
  rep.value = ws.value();
  return rep;
}

inline std::vector<int> full_order(Eigen::Index n) {
  std::vector<int> order(n);
  for (Eigen::Index i = 0; i < n; ++i) order[i] = static_cast<int>(i);
  return order;
}

}  // namespace detail

// Quadratic-form lower bound alpha^T sigma^-1 alpha over the retained
// events. detail carries the coefficient vector c with sigma_RR c_R =
// alpha_R and zeros at skipped events.
template <class Scalar>
BoundResult<Scalar> gk_direct(const MomentSummary<Scalar>& ms) {
  SymmetricSolveWorkspace<Scalar> ws(ms.size());
  const auto rep = detail::run_quadratic_bound(ms, detail::full_order(ms.size()), ws);
  auto r = make_bound_result<Scalar>("gk", Direction::lower, rep.value);
  r.detail = ws.coefficients(ms.size());
  return r;
}

// Same computation, returning the per-step diagnostics instead.
template <class Scalar>
GkReport<Scalar> gk_iterative(const MomentSummary<Scalar>& ms) {
  SymmetricSolveWorkspace<Scalar> ws(ms.size());
  return detail::run_quadratic_bound(ms, detail::full_order(ms.size()), ws);
}

// Bound restricted to a subset of events. Never exceeds the full bound:
// restriction only removes candidate coefficient vectors.
template <class Scalar>
BoundResult<Scalar> gk_subset(const MomentSummary<Scalar>& ms, const IndexSubset& subset) {
  if (subset.indices.empty())
    throw std::invalid_argument("subset must be non-empty");
  for (std::size_t p = 0; p < subset.indices.size(); ++p) {
    const int idx = subset.indices[p];
    if (idx < 0 || idx >= ms.size())
      throw std::invalid_argument("subset index out of range");
    if (p > 0 && subset.indices[p] <= subset.indices[p - 1])
      throw std::invalid_argument("subset indices must be strictly increasing");
  }
  SymmetricSolveWorkspace<Scalar> ws(static_cast<Eigen::Index>(subset.indices.size()));
  const auto rep = detail::run_quadratic_bound(ms, subset.indices, ws);
  auto r = make_bound_result<Scalar>("gk-subset", Direction::lower, rep.value);
  r.detail = ws.coefficients(ms.size());
  return r;
}

// Rayleigh form (c . alpha)^2 / (c^T sigma c): a lower bound for every
// weighting c, with equality at the solving coefficients.
template <class Scalar>
Scalar gk_rayleigh(const MomentSummary<Scalar>& ms, const VectorX<Scalar>& c) {
  if (c.size() != ms.size())
    throw std::invalid_argument("weight vector must have one entry per event");
  const Scalar den = c.dot(ms.sigma * c);
  if (!(den > Scalar(1e-15)))
    throw std::invalid_argument("quadratic form c^T sigma c must be positive");
  const Scalar num = c.dot(ms.alpha);
  return num * num / den;
}

// Residual of event n against the leading events 0..n-1, all of which must
// be retained; a zero residual means event n adds no independent direction.
template <class Scalar>
Scalar residual_condition(const MomentSummary<Scalar>& ms, int n) {
  if (n < 0 || n >= ms.size())
    throw std::invalid_argument("event index out of range");
  SymmetricSolveWorkspace<Scalar> ws(ms.size());
  for (int i = 0; i < n; ++i) {
    const VectorX<Scalar> col = detail::gather_column(ms, ws.retained(), i);
    if (!ws.push(i, ms.alpha[i], col).retained)
      throw std::invalid_argument("leading principal subsystem is singular");
  }
  return ws.probe_residual(ms.alpha[n], detail::gather_column(ms, ws.retained(), n));
}

}  // namespace unionbound
