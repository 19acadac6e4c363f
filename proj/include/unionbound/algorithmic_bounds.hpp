#pragma once

#include "unionbound/core.hpp"

#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>

namespace unionbound {

inline constexpr int kKouniasExhaustiveCap = 20;  // 2^N subsets
inline constexpr int kHunterExhaustiveCap = 8;    // N^(N-2) spanning trees

namespace detail {

// Pairwise weight read from the upper triangle, matching the theta2
// convention for summaries that are not exactly symmetric.
template <class Scalar>
Scalar pair_weight(const MomentSummary<Scalar>& ms, int i, int j) {
  return i < j ? ms.sigma(i, j) : ms.sigma(j, i);
}

// Subset objective sum_{i in S} alpha_i - sum_{i < j in S} sigma_ij,
// evaluated from scratch.
template <class Scalar>
Scalar subset_objective(const MomentSummary<Scalar>& ms, const std::vector<int>& s) {
  Scalar value = 0;
  for (std::size_t p = 0; p < s.size(); ++p) {
    value += ms.alpha[s[p]];
    for (std::size_t q = p + 1; q < s.size(); ++q)
      value -= pair_weight(ms, s[p], s[q]);
  }
  return value;
}

inline std::vector<int> mask_to_indices(std::uint32_t mask) {
  std::vector<int> out;
  for (int i = 0; mask != 0; ++i, mask >>= 1)
    if (mask & 1u) out.push_back(i);
  return out;
}

}  // namespace detail

// Best subset lower bound: max over non-empty S of
// sum_{i in S} alpha_i - sum_{i < j in S} sigma_ij. Dynamic programming over
// bitmasks; exact ties resolve to the lexicographically smallest index set.
template <class Scalar>
BoundResult<Scalar> kounias_exhaustive(const MomentSummary<Scalar>& ms,
                                       int max_events = kKouniasExhaustiveCap) {
  const int n = static_cast<int>(ms.size());
  if (n > max_events)
    throw std::invalid_argument("kounias-exhaustive refuses more than " +
                                std::to_string(max_events) + " events");
  const std::uint32_t all = (n == 32) ? ~0u : ((1u << n) - 1u);
  std::vector<Scalar> obj(std::size_t(all) + 1, Scalar(0));
  Scalar best = -std::numeric_limits<Scalar>::infinity();
  std::uint32_t best_mask = 0;
  for (std::uint32_t mask = 1; mask <= all; ++mask) {
    const int b = std::countr_zero(mask);
    const std::uint32_t rest = mask & (mask - 1);
    Scalar v = obj[rest] + ms.alpha[b];
    for (int j = b + 1; j < n; ++j)
      if (rest & (1u << j)) v -= ms.sigma(b, j);
    obj[mask] = v;
    if (v > best) {
      best = v;
      best_mask = mask;
    } else if (v == best) {
      const auto cand = detail::mask_to_indices(mask);
      const auto cur = detail::mask_to_indices(best_mask);
      if (std::lexicographical_compare(cand.begin(), cand.end(), cur.begin(), cur.end()))
        best_mask = mask;
    }
  }
  auto r = make_bound_result<Scalar>("kounias-exhaustive", Direction::lower, best);
  r.detail = IndexSubset{detail::mask_to_indices(best_mask)};
  return r;
}

// Stepwise subset search: start from the best singleton, then repeatedly
// take the best single add, remove, or swap improving the objective by more
// than 1e-12. Ties prefer adds over removes over swaps, then smaller
// indices. No cap on N; the result is a valid lower bound but may fall
// short of the exhaustive optimum.
template <class Scalar>
BoundResult<Scalar> kounias_stepwise(const MomentSummary<Scalar>& ms) {
  const int n = static_cast<int>(ms.size());
  std::vector<char> in(n, 0);
  // row_sum[i] = sum over j in S of the pairwise weight (i, j), diagonal
  // included while i itself is in S.
  std::vector<Scalar> row_sum(n, Scalar(0));
  int start = 0;
  for (int i = 1; i < n; ++i)
    if (ms.alpha[i] > ms.alpha[start]) start = i;
  std::vector<int> members{start};
  in[start] = 1;
  for (int j = 0; j < n; ++j) row_sum[j] += detail::pair_weight(ms, j, start);

  const Scalar min_gain = Scalar(1e-12);
  while (true) {
    enum class Move { none, add, remove, swap };
    Move move = Move::none;
    int move_in = -1, move_out = -1;
    Scalar best_delta = min_gain;
    auto consider = [&](Scalar delta, Move m, int out, int inn) {
      if (delta > best_delta) {
        best_delta = delta;
        move = m;
        move_out = out;
        move_in = inn;
      }
    };
    for (int i = 0; i < n; ++i)
      if (!in[i]) consider(ms.alpha[i] - row_sum[i], Move::add, -1, i);
    if (members.size() >= 2)
      for (int o = 0; o < n; ++o)
        if (in[o])
          consider(row_sum[o] - ms.sigma(o, o) - ms.alpha[o], Move::remove, o, -1);
    for (int o = 0; o < n; ++o) {
      if (!in[o]) continue;
      const Scalar drop = row_sum[o] - ms.sigma(o, o) - ms.alpha[o];
      for (int i = 0; i < n; ++i)
        if (!in[i])
          consider(drop + ms.alpha[i] - row_sum[i] + detail::pair_weight(ms, i, o),
                   Move::swap, o, i);
    }
    if (move == Move::none) break;
    if (move == Move::remove || move == Move::swap) {
      in[move_out] = 0;
      members.erase(std::find(members.begin(), members.end(), move_out));
      for (int j = 0; j < n; ++j) row_sum[j] -= detail::pair_weight(ms, j, move_out);
    }
    if (move == Move::add || move == Move::swap) {
      in[move_in] = 1;
      members.push_back(move_in);
      for (int j = 0; j < n; ++j) row_sum[j] += detail::pair_weight(ms, j, move_in);
    }
  }
  std::sort(members.begin(), members.end());
  auto r = make_bound_result<Scalar>("kounias-stepwise", Direction::lower,
                                     detail::subset_objective(ms, members));
  r.detail = IndexSubset{std::move(members)};
  return r;
}

namespace detail {

// Decodes one length n-2 sequence over {0..n-1} into its labeled tree;
// every tree appears for exactly one sequence.
inline void decode_tree(const std::vector<int>& code, int n,
                        std::vector<std::pair<int, int>>& edges) {
  edges.clear();
  std::vector<int> degree(n, 1);
  for (int v : code) ++degree[v];
  int ptr = 0;
  while (degree[ptr] != 1) ++ptr;
  int leaf = ptr;
  for (int v : code) {
    edges.emplace_back(std::min(leaf, v), std::max(leaf, v));
    if (--degree[v] == 1 && v < ptr) {
      leaf = v;
    } else {
      ++ptr;
      while (degree[ptr] != 1) ++ptr;
      leaf = ptr;
    }
  }
  edges.emplace_back(std::min(leaf, n - 1), std::max(leaf, n - 1));
}

struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

template <class Scalar>
BoundResult<Scalar> hunter_from_tree(const MomentSummary<Scalar>& ms, const char* name,
                                     std::vector<std::pair<int, int>> edges) {
  Scalar weight = 0;
  for (const auto& [i, j] : edges) weight += ms.sigma(i, j);
  std::sort(edges.begin(), edges.end());
  auto r = make_bound_result<Scalar>(name, Direction::upper, ms.theta1 - weight);
  r.detail = SpanningTree{std::move(edges)};
  return r;
}

}  // namespace detail

// Tree upper bound, exhaustive: theta1 minus the weight of the heaviest
// spanning tree over all N^(N-2) labeled trees.
template <class Scalar>
BoundResult<Scalar> hunter_exhaustive(const MomentSummary<Scalar>& ms,
                                      int max_events = kHunterExhaustiveCap) {
  const int n = static_cast<int>(ms.size());
  if (n > max_events)
    throw std::invalid_argument("hunter-exhaustive refuses more than " +
                                std::to_string(max_events) + " events");
  if (n == 1)
    return detail::hunter_from_tree(ms, "hunter-exhaustive", {});
  if (n == 2)
    return detail::hunter_from_tree(ms, "hunter-exhaustive", {{0, 1}});
  std::vector<int> code(n - 2, 0);
  std::vector<std::pair<int, int>> edges, best_edges;
  Scalar best = -std::numeric_limits<Scalar>::infinity();
  while (true) {
    detail::decode_tree(code, n, edges);
    Scalar w = 0;
    for (const auto& [i, j] : edges) w += detail::pair_weight(ms, i, j);
    if (w > best) {
      best = w;
      best_edges = edges;
    }
    int pos = n - 3;
    while (pos >= 0 && code[pos] == n - 1) code[pos--] = 0;
    if (pos < 0) break;
    ++code[pos];
  }
  return detail::hunter_from_tree(ms, "hunter-exhaustive", std::move(best_edges));
}

// Tree upper bound, greedy: maximum spanning tree by descending edge weight
// with lexicographic tie-breaks. Greedy is exact for this objective, so the
// value matches the exhaustive search.
template <class Scalar>
BoundResult<Scalar> hunter_greedy(const MomentSummary<Scalar>& ms) {
  const int n = static_cast<int>(ms.size());
  if (n == 1) return detail::hunter_from_tree(ms, "hunter-greedy", {});
  struct Edge {
    Scalar w;
    int i, j;
  };
  std::vector<Edge> all;
  all.reserve(std::size_t(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) all.push_back({ms.sigma(i, j), i, j});
  std::sort(all.begin(), all.end(), [](const Edge& a, const Edge& b) {
    if (a.w != b.w) return a.w > b.w;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  detail::DisjointSet dsu(n);
  std::vector<std::pair<int, int>> edges;
  for (const Edge& e : all) {
    if (dsu.unite(e.i, e.j)) {
      edges.emplace_back(e.i, e.j);
      if (static_cast<int>(edges.size()) == n - 1) break;
    }
  }
  return detail::hunter_from_tree(ms, "hunter-greedy", std::move(edges));
}

}  // namespace unionbound
