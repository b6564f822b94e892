#pragma once

// Checks of split results and lex partitions against truth tables.

#include <lexbdd/split.hpp>

#include <support/truth_table.hpp>

#include <string>
#include <unordered_set>

namespace lexbdd::testing {

/// Empty string when the pair has the exact split set identities at `s`.
inline std::string check_split(const NodeStore &store, const Domain &dom, const TruthTable &f,
                               const Assignment &s, SplitPair p) {
  const TruthTable left = table_of(store, dom, p.left);
  const TruthTable right = table_of(store, dom, p.right);
  const std::uint64_t cut = index_of(s);
  for (std::uint64_t i = 0; i < f.size(); ++i) {
    const bool want_left = f[i] && i <= cut;
    const bool want_right = f[i] && i > cut;
    if (left[i] != want_left || right[i] != want_right)
      return "mismatch at assignment " + std::to_string(i) + " cut " + std::to_string(cut);
  }
  return {};
}

/// Slots >= `first_new` reachable from `f`.
inline std::size_t new_slots_reachable(const NodeStore &store, Edge f, std::size_t first_new) {
  std::unordered_set<std::uint32_t> seen;
  std::vector<std::uint32_t> stack{f.slot()};
  std::size_t count = 0;
  while (!stack.empty()) {
    const std::uint32_t s = stack.back();
    stack.pop_back();
    if (s == 1 || !seen.insert(s).second)
      continue;
    if (s >= first_new)
      ++count;
    const Node &n = store.node(Edge(static_cast<std::int32_t>(s)));
    stack.push_back(n.then_edge.slot());
    stack.push_back(n.else_edge.slot());
  }
  return count;
}

/// Empty string when `p` satisfies the five lex-partition conditions for `f`:
/// parts over the store order, strictly increasing cuts ending in all ones,
/// cover, pairwise disjointness and the window characterisation.
inline std::string check_lex_partition(NodeStore &store, const Domain &dom, const TruthTable &f,
                                       const LexPartition &p) {
  if (p.cuts.empty() || p.cuts.size() != p.parts.size())
    return "cuts and parts differ in number";
  if (p.cuts.back() != Assignment(dom.size(), true))
    return "last cut is not all ones";
  for (std::size_t i = 1; i < p.cuts.size(); ++i)
    if (!(index_of(p.cuts[i - 1]) < index_of(p.cuts[i])))
      return "cuts not strictly increasing at " + std::to_string(i);
  Edge cover = Edge::zero();
  for (std::size_t i = 0; i < p.parts.size(); ++i) {
    for (std::size_t j = i + 1; j < p.parts.size(); ++j)
      if (!store.conj(p.parts[i], p.parts[j]).is_zero())
        return "parts " + std::to_string(i) + " and " + std::to_string(j) + " overlap";
    cover = store.disj(cover, p.parts[i]);
  }
  if (table_of(store, dom, cover) != f)
    return "parts do not cover f";
  for (std::size_t i = 0; i < p.parts.size(); ++i) {
    const TruthTable part = table_of(store, dom, p.parts[i]);
    const std::uint64_t hi = index_of(p.cuts[i]);
    for (std::uint64_t a = 0; a < f.size(); ++a) {
      const bool in_window = a <= hi && (i == 0 || a > index_of(p.cuts[i - 1]));
      if (part[a] != (f[a] && in_window))
        return "part " + std::to_string(i) + " differs from its window at " + std::to_string(a);
    }
  }
  return {};
}

} // namespace lexbdd::testing
