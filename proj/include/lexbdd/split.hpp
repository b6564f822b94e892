#pragma once

#include <lexbdd/rank.hpp>

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

namespace lexbdd {

/// `left` holds the satisfying assignments b <=_lex s, `right` those b >_lex s.
struct SplitPair {
  Edge left;
  Edge right;
};

struct SplitStats {
  std::size_t new_slots = 0;
  std::uint32_t max_depth = 0;
};

/// Cut assignments a_1 <_lex ... <_lex a_k = (1,...,1) and the parts
/// f_i = f restricted to the window (a_{i-1}, a_i].
struct LexPartition {
  std::vector<Assignment> cuts;
  std::vector<Edge> parts;
};

namespace detail {

class Splitter {
public:
  Splitter(NodeStore &store, const Domain &domain, const Assignment &s)
      : store_(store), domain_(domain), s_(s) {}

  SplitPair run(Edge n, std::uint32_t lev, std::uint32_t depth) {
    max_depth = std::max(max_depth, depth);
    const Edge z = Edge::zero();
    const std::uint32_t n_lev = domain_.level(store_, n);
    if (lev < n_lev) {
      // The level is skipped in f: split it as if a node with both edges
      // pointing to n were present.
      const auto [s1, s2] = run(n, lev + 1, depth + 1);
      const var_t v = domain_.var(lev);
      if (s_[lev])
        return {store_.mk_node(v, s1, n), store_.mk_node(v, s2, z)};
      return {store_.mk_node(v, z, s1), store_.mk_node(v, n, s2)};
    }
    if (n.is_sink())
      return {n, z};
    const Edge t = store_.then_of(n);
    const Edge e = store_.else_of(n);
    const var_t v = store_.var_of(n);
    if (s_[lev]) {
      const auto [t1, t2] = run(t, lev + 1, depth + 1);
      return {store_.mk_node(v, t1, e), store_.mk_node(v, t2, z)};
    }
    const auto [e1, e2] = run(e, lev + 1, depth + 1);
    return {store_.mk_node(v, z, e1), store_.mk_node(v, t, e2)};
  }

  std::uint32_t max_depth = 0;

private:
  NodeStore &store_;
  const Domain &domain_;
  const Assignment &s_;
};

} // namespace detail

/// Splits `f` along the path of `s`. Creates at most 2n slots in the shared
/// store and visits at most n + 1 levels.
inline SplitPair split(NodeStore &store, const Domain &domain, Edge f, const Assignment &s,
                       SplitStats *stats = nullptr) {
  if (s.size() != domain.size())
    throw contract_violation("split assignment length " + std::to_string(s.size()) +
                             " differs from domain size " + std::to_string(domain.size()));
  const std::size_t before = store.size();
  detail::Splitter splitter(store, domain, s);
  const SplitPair out = splitter.run(f, 0, 1);
  if (stats) {
    stats->new_slots = store.size() - before;
    stats->max_depth = splitter.max_depth;
  }
  return out;
}

/// Left part gets exactly the `m` lexicographically smallest satisfying
/// assignments of the table's root.
inline SplitPair split_at_count(NodeStore &store, const CountTable &table, const count_t &m,
                                SplitStats *stats = nullptr) {
  if (m < 1 || m > table.root_count())
    throw std::out_of_range("split count " + m.str() + " outside [1, " +
                            table.root_count().str() + "]");
  return split(store, table.domain(), table.root(), unrank(table, m - 1), stats);
}

/// Splits into halves with counts (floor(C/2), ceil(C/2)).
inline SplitPair split_half(NodeStore &store, const CountTable &table) {
  const count_t half = table.root_count() / 2;
  if (half == 0)
    return {Edge::zero(), table.root()};
  return split_at_count(store, table, half);
}

/// Cuts `f` at successive assignments. `cuts` must be strictly increasing
/// and end in the all-ones assignment.
inline LexPartition partition_at_cuts(NodeStore &store, const Domain &domain, Edge f,
                                      std::vector<Assignment> cuts) {
  LexPartition out;
  Edge rest = f;
  for (const Assignment &cut : cuts) {
    const SplitPair p = split(store, domain, rest, cut);
    out.parts.push_back(p.left);
    rest = p.right;
  }
  out.cuts = std::move(cuts);
  return out;
}

namespace detail {

/// Partition cutting after each listed rank (ascending, each < C_f).
inline LexPartition partition_after_ranks(NodeStore &store, const CountTable &table,
                                          const std::vector<count_t> &ranks) {
  std::vector<Assignment> cuts;
  for (const count_t &r : ranks) {
    Assignment a = unrank(table, r);
    if (cuts.empty() || cuts.back() != a)
      cuts.push_back(std::move(a));
  }
  Assignment ones(table.num_vars(), true);
  if (cuts.empty() || cuts.back() != ones)
    cuts.push_back(std::move(ones));
  return partition_at_cuts(store, table.domain(), table.root(), std::move(cuts));
}

} // namespace detail

/// `k` lex-contiguous parts whose state counts differ by at most one. When
/// C_f < k duplicate cuts are dropped and the result has fewer parts.
inline LexPartition fold_states_lex(NodeStore &store, const CountTable &table, std::size_t k) {
  if (k == 0)
    throw contract_violation("fold_states_lex needs k >= 1");
  const count_t &total = table.root_count();
  std::vector<count_t> ranks;
  for (std::size_t i = 1; i < k; ++i) {
    const count_t q = (total * i + (k - 1)) / k; // ceil(i * C / k)
    if (q >= 1)
      ranks.push_back(q - 1);
  }
  return detail::partition_after_ranks(store, table, ranks);
}

/// ceil(C_f / bound) lex-contiguous parts of at most `bound` states each.
inline LexPartition states_lex_bounded(NodeStore &store, const CountTable &table,
                                       const count_t &bound) {
  if (bound < 1)
    throw contract_violation("states_lex_bounded needs bound >= 1");
  const count_t &total = table.root_count();
  std::vector<count_t> ranks;
  for (count_t r = bound; r < total; r += bound)
    ranks.push_back(r - 1);
  return detail::partition_after_ranks(store, table, ranks);
}

/// Decomposes `f` into (f AND NOT x, f AND x) for the support variable x
/// that minimises the larger of the two node counts. Ties go to the
/// variable nearest the root. Constant `f` yields (f, 0).
inline SplitPair disj_var(NodeStore &store, Edge f, std::optional<var_t> *chosen = nullptr) {
  if (chosen)
    chosen->reset();
  if (f.is_sink())
    return {f, Edge::zero()};
  SplitPair best{f, Edge::zero()};
  std::size_t best_score = 0;
  bool found = false;
  for (var_t v : store.support(f)) {
    const Edge x = store.var(v);
    const Edge lo = store.conj(f, !x);
    const Edge hi = store.conj(f, x);
    const std::size_t score = std::max(store.dag_size(lo), store.dag_size(hi));
    if (!found || score < best_score) {
      best = {lo, hi};
      best_score = score;
      found = true;
      if (chosen)
        *chosen = v;
    }
  }
  return best;
}

} // namespace lexbdd
