#pragma once

#include <lexbdd/edge.hpp>

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace lexbdd {

struct Node {
  var_t var;
  Edge then_edge;
  Edge else_edge;
};

enum class BoolOp : std::uint8_t { And, Or, Xor };

namespace detail {

inline std::size_t mix(std::size_t seed, std::size_t v) noexcept {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

struct NodeKey {
  var_t var;
  std::int32_t then_index;
  std::int32_t else_index;
  friend bool operator==(const NodeKey &, const NodeKey &) = default;
};

struct NodeKeyHash {
  std::size_t operator()(const NodeKey &k) const noexcept {
    std::size_t h = std::hash<std::uint32_t>{}(k.var);
    h = mix(h, std::hash<std::int32_t>{}(k.then_index));
    return mix(h, std::hash<std::int32_t>{}(k.else_index));
  }
};

struct PairKey {
  std::int32_t a;
  std::int32_t b;
  std::uint8_t tag;
  friend bool operator==(const PairKey &, const PairKey &) = default;
};

struct PairKeyHash {
  std::size_t operator()(const PairKey &k) const noexcept {
    std::size_t h = std::hash<std::int32_t>{}(k.a);
    h = mix(h, std::hash<std::int32_t>{}(k.b));
    return mix(h, k.tag);
  }
};

} // namespace detail

/// Shared store of reduced ordered BDD nodes with complement edges.
///
/// Nodes live in an append-only slot array; slot 1 is the sink. The
/// Then-edge of every stored node is regular, complement bits live on
/// Else-edges and on incoming references. All BDDs in one store share the
/// same variable order.
///
/// Node-creating operations need exclusive access. Once a store is no
/// longer mutated, the const members may be called from several threads.
class NodeStore {
public:
  /// Store over `num_vars` variables with the identity order.
  explicit NodeStore(std::size_t num_vars)
      : NodeStore(identity_order(num_vars)) {}

  /// Store whose level `l` holds variable `order[l]`.
  explicit NodeStore(std::vector<var_t> order) : var_at_level_(std::move(order)) {
    level_of_var_.assign(var_at_level_.size(), npos);
    for (std::size_t l = 0; l < var_at_level_.size(); ++l) {
      const var_t v = var_at_level_[l];
      if (v >= var_at_level_.size() || level_of_var_[v] != npos)
        throw contract_violation("variable order is not a permutation");
      level_of_var_[v] = static_cast<std::uint32_t>(l);
    }
    const auto sink_var = static_cast<var_t>(var_at_level_.size());
    nodes_.push_back(Node{sink_var, Edge{}, Edge{}}); // slot 0 is never used
    nodes_.push_back(Node{sink_var, Edge::one(), Edge::one()});
  }

  std::size_t num_vars() const noexcept { return var_at_level_.size(); }

  /// Number of occupied slots, the sink included.
  std::size_t size() const noexcept { return nodes_.size() - 1; }

  std::uint32_t level_of(var_t v) const {
    if (v >= level_of_var_.size())
      throw contract_violation("unknown variable " + std::to_string(v));
    return level_of_var_[v];
  }
  var_t var_at(std::uint32_t level) const { return var_at_level_.at(level); }
  std::span<const var_t> order() const noexcept { return var_at_level_; }

  /// Level of the node `e` points to; sinks sit at level num_vars().
  std::uint32_t level(Edge e) const noexcept {
    const Node &n = nodes_[e.slot()];
    return e.is_sink() ? static_cast<std::uint32_t>(num_vars()) : level_of_var_[n.var];
  }
  var_t var_of(Edge e) const noexcept { return nodes_[e.slot()].var; }

  /// Signed successors: the sign of `e` is pushed onto both children.
  Edge then_of(Edge e) const noexcept { return nodes_[e.slot()].then_edge.signed_by(e); }
  Edge else_of(Edge e) const noexcept { return nodes_[e.slot()].else_edge.signed_by(e); }

  const Node &node(Edge e) const noexcept { return nodes_[e.slot()]; }

  bool valid(Edge e) const noexcept {
    return e.index() != 0 && e.slot() < nodes_.size();
  }

  static constexpr Edge negate(Edge f) noexcept { return !f; }

  /// Hash-consing constructor. Applies the elimination rule, moves a
  /// complemented Then-edge onto the result, and reuses existing slots.
  Edge mk_node(var_t v, Edge t, Edge e) {
    if (v >= num_vars())
      throw contract_violation("mk_node: unknown variable " + std::to_string(v));
    const std::uint32_t lv = level_of_var_[v];
    if (!(lv < level(t) && lv < level(e)))
      throw contract_violation("mk_node: variable " + std::to_string(v) +
                               " is not above its children in the order");
    if (t == e)
      return t;
    if (t.complemented())
      return !mk_node(v, !t, !e);

    const detail::NodeKey key{v, t.index(), e.index()};
    if (auto it = unique_.find(key); it != unique_.end())
      return Edge(it->second);

    if (nodes_.size() >= node_limit_)
      throw budget_exhausted("node budget of " + std::to_string(node_limit_) +
                             " slots exhausted");
    if (nodes_.size() >= static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max()))
      throw store_overflow("node store is full");
    if (deadline_ && (++allocations_ & 1023U) == 0)
      check_deadline();

    const auto slot = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(Node{v, t, e});
    unique_.emplace(key, slot);
    return Edge(slot);
  }

  /// Single-variable function `v`.
  Edge var(var_t v) { return mk_node(v, Edge::one(), Edge::zero()); }

  Edge apply(BoolOp op, Edge f, Edge g) {
    if (apply_cache_.size() > cache_limit_)
      apply_cache_.clear();
    switch (op) {
    case BoolOp::And:
      return and_rec(f, g);
    case BoolOp::Or:
      return !and_rec(!f, !g);
    case BoolOp::Xor:
      return xor_rec(f, g);
    }
    return f;
  }
  Edge conj(Edge f, Edge g) { return apply(BoolOp::And, f, g); }
  Edge disj(Edge f, Edge g) { return apply(BoolOp::Or, f, g); }
  Edge exor(Edge f, Edge g) { return apply(BoolOp::Xor, f, g); }
  Edge iff(Edge f, Edge g) { return !exor(f, g); }
  Edge diff(Edge f, Edge g) { return conj(f, !g); }

  /// Existential quantification of `vars` in `f`.
  Edge exists(std::span<const var_t> vars, Edge f) {
    const QuantMask mask = make_mask(vars);
    std::unordered_map<Edge, Edge> memo;
    return exists_rec(f, mask, memo);
  }

  /// Relational product: exists(vars, f AND g) without building f AND g.
  Edge and_exists(std::span<const var_t> vars, Edge f, Edge g) {
    const QuantMask mask = make_mask(vars);
    std::unordered_map<detail::PairKey, Edge, detail::PairKeyHash> memo;
    std::unordered_map<Edge, Edge> ex_memo;
    return and_exists_rec(f, g, mask, memo, ex_memo);
  }

  /// Substitutes variables per `map` (from, to); unlisted variables stay.
  /// The substitution must keep every node above its children, otherwise
  /// mk_node raises contract_violation.
  Edge rename(Edge f, std::span<const std::pair<var_t, var_t>> map) {
    std::vector<var_t> target(num_vars());
    std::iota(target.begin(), target.end(), var_t{0});
    std::vector<char> seen_from(num_vars(), 0), seen_to(num_vars(), 0);
    for (auto [from, to] : map) {
      if (from >= num_vars() || to >= num_vars())
        throw contract_violation("rename: unknown variable");
      if (seen_from[from] || seen_to[to])
        throw contract_violation("rename: map is not injective");
      seen_from[from] = seen_to[to] = 1;
      target[from] = to;
    }
    std::unordered_map<std::uint32_t, Edge> memo;
    return rename_rec(f, target, memo);
  }

  /// Evaluates `f` under `values`, indexed by variable id.
  bool eval(Edge f, const std::vector<bool> &values) const {
    bool negated = false;
    while (!f.is_sink()) {
      negated ^= f.complemented();
      const Node &n = nodes_[f.slot()];
      f = values[n.var] ? n.then_edge : n.else_edge;
    }
    return negated ^ f.is_one();
  }

  /// Distinct nodes reachable from the roots, the sink included.
  std::size_t dag_size(std::span<const Edge> roots) const {
    std::unordered_set<std::uint32_t> seen;
    std::vector<std::uint32_t> stack;
    for (Edge r : roots)
      stack.push_back(r.slot());
    while (!stack.empty()) {
      const std::uint32_t s = stack.back();
      stack.pop_back();
      if (!seen.insert(s).second || s == 1)
        continue;
      stack.push_back(nodes_[s].then_edge.slot());
      stack.push_back(nodes_[s].else_edge.slot());
    }
    return seen.size();
  }
  std::size_t dag_size(Edge f) const { return dag_size(std::span<const Edge>(&f, 1)); }

  /// Variables `f` depends on, sorted by level.
  std::vector<var_t> support(Edge f) const {
    std::vector<char> present(num_vars(), 0);
    std::unordered_set<std::uint32_t> seen;
    std::vector<std::uint32_t> stack{f.slot()};
    while (!stack.empty()) {
      const std::uint32_t s = stack.back();
      stack.pop_back();
      if (s == 1 || !seen.insert(s).second)
        continue;
      present[level_of_var_[nodes_[s].var]] = 1;
      stack.push_back(nodes_[s].then_edge.slot());
      stack.push_back(nodes_[s].else_edge.slot());
    }
    std::vector<var_t> out;
    for (std::uint32_t l = 0; l < num_vars(); ++l)
      if (present[l])
        out.push_back(var_at_level_[l]);
    return out;
  }

  void clear_caches() { apply_cache_.clear(); }
  void set_cache_limit(std::size_t entries) { cache_limit_ = entries; }

  /// Caps the number of slots; mk_node throws budget_exhausted beyond it.
  void set_node_limit(std::size_t slots) { node_limit_ = slots; }
  std::size_t node_limit() const noexcept { return node_limit_; }

  void set_deadline(std::optional<std::chrono::steady_clock::time_point> deadline) {
    deadline_ = deadline;
  }
  void check_deadline() const {
    if (deadline_ && std::chrono::steady_clock::now() >= *deadline_)
      throw budget_exhausted("time budget exhausted");
  }

private:
  static constexpr std::uint32_t npos = std::numeric_limits<std::uint32_t>::max();

  struct QuantMask {
    std::vector<char> at_level;
    std::int64_t max_level = -1;
  };

  static std::vector<var_t> identity_order(std::size_t n) {
    std::vector<var_t> order(n);
    std::iota(order.begin(), order.end(), var_t{0});
    return order;
  }

  QuantMask make_mask(std::span<const var_t> vars) const {
    QuantMask m;
    m.at_level.assign(num_vars(), 0);
    for (var_t v : vars) {
      const std::uint32_t l = level_of(v);
      m.at_level[l] = 1;
      m.max_level = std::max<std::int64_t>(m.max_level, l);
    }
    return m;
  }

  std::pair<Edge, Edge> cofactors(Edge f, std::uint32_t lv) const noexcept {
    if (level(f) != lv)
      return {f, f};
    return {then_of(f), else_of(f)};
  }

  Edge and_rec(Edge f, Edge g) {
    if (f.is_zero() || g.is_zero() || f == !g)
      return Edge::zero();
    if (f.is_one() || f == g)
      return g;
    if (g.is_one())
      return f;
    if (g < f)
      std::swap(f, g);
    const detail::PairKey key{f.index(), g.index(), static_cast<std::uint8_t>(BoolOp::And)};
    if (auto it = apply_cache_.find(key); it != apply_cache_.end())
      return it->second;
    const std::uint32_t lv = std::min(level(f), level(g));
    const auto [f1, f0] = cofactors(f, lv);
    const auto [g1, g0] = cofactors(g, lv);
    const Edge hi = and_rec(f1, g1);
    const Edge lo = and_rec(f0, g0);
    const Edge r = mk_node(var_at_level_[lv], hi, lo);
    apply_cache_.emplace(key, r);
    return r;
  }

  Edge xor_rec(Edge f, Edge g) {
    const bool negated = f.complemented() != g.complemented();
    f = f.regular();
    g = g.regular();
    Edge r;
    if (f == g) {
      r = Edge::zero();
    } else if (f.is_one()) {
      r = !g;
    } else if (g.is_one()) {
      r = !f;
    } else {
      if (g < f)
        std::swap(f, g);
      const detail::PairKey key{f.index(), g.index(), static_cast<std::uint8_t>(BoolOp::Xor)};
      if (auto it = apply_cache_.find(key); it != apply_cache_.end()) {
        r = it->second;
      } else {
        const std::uint32_t lv = std::min(level(f), level(g));
        const auto [f1, f0] = cofactors(f, lv);
        const auto [g1, g0] = cofactors(g, lv);
        const Edge hi = xor_rec(f1, g1);
        const Edge lo = xor_rec(f0, g0);
        r = mk_node(var_at_level_[lv], hi, lo);
        apply_cache_.emplace(key, r);
      }
    }
    return negated ? !r : r;
  }

  Edge exists_rec(Edge f, const QuantMask &mask, std::unordered_map<Edge, Edge> &memo) {
    if (f.is_sink() || static_cast<std::int64_t>(level(f)) > mask.max_level)
      return f;
    if (auto it = memo.find(f); it != memo.end())
      return it->second;
    const std::uint32_t lv = level(f);
    const Edge hi = exists_rec(then_of(f), mask, memo);
    Edge r;
    if (mask.at_level[lv]) {
      r = hi.is_one() ? hi : disj(hi, exists_rec(else_of(f), mask, memo));
    } else {
      r = mk_node(var_at_level_[lv], hi, exists_rec(else_of(f), mask, memo));
    }
    memo.emplace(f, r);
    return r;
  }

  Edge and_exists_rec(Edge f, Edge g, const QuantMask &mask,
                      std::unordered_map<detail::PairKey, Edge, detail::PairKeyHash> &memo,
                      std::unordered_map<Edge, Edge> &ex_memo) {
    if (f.is_zero() || g.is_zero() || f == !g)
      return Edge::zero();
    if (f.is_one() || f == g)
      return exists_rec(g, mask, ex_memo);
    if (g.is_one())
      return exists_rec(f, mask, ex_memo);
    const std::uint32_t lv = std::min(level(f), level(g));
    if (static_cast<std::int64_t>(lv) > mask.max_level)
      return conj(f, g);
    if (g < f)
      std::swap(f, g);
    const detail::PairKey key{f.index(), g.index(), 0};
    if (auto it = memo.find(key); it != memo.end())
      return it->second;
    const auto [f1, f0] = cofactors(f, lv);
    const auto [g1, g0] = cofactors(g, lv);
    const Edge hi = and_exists_rec(f1, g1, mask, memo, ex_memo);
    Edge r;
    if (mask.at_level[lv]) {
      r = hi.is_one() ? hi : disj(hi, and_exists_rec(f0, g0, mask, memo, ex_memo));
    } else {
      r = mk_node(var_at_level_[lv], hi, and_exists_rec(f0, g0, mask, memo, ex_memo));
    }
    memo.emplace(key, r);
    return r;
  }

  Edge rename_rec(Edge f, const std::vector<var_t> &target,
                  std::unordered_map<std::uint32_t, Edge> &memo) {
    if (f.is_sink())
      return f;
    if (auto it = memo.find(f.slot()); it != memo.end())
      return it->second.signed_by(f);
    const Node n = nodes_[f.slot()];
    const Edge hi = rename_rec(n.then_edge, target, memo);
    const Edge lo = rename_rec(n.else_edge, target, memo);
    const Edge r = mk_node(target[n.var], hi, lo);
    memo.emplace(f.slot(), r);
    return r.signed_by(f);
  }

  std::vector<var_t> var_at_level_;
  std::vector<std::uint32_t> level_of_var_;
  std::vector<Node> nodes_;
  std::unordered_map<detail::NodeKey, std::int32_t, detail::NodeKeyHash> unique_;
  std::unordered_map<detail::PairKey, Edge, detail::PairKeyHash> apply_cache_;
  std::size_t cache_limit_ = std::size_t{1} << 22;
  std::size_t node_limit_ = std::numeric_limits<std::size_t>::max();
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  std::uint32_t allocations_ = 0;
};

} // namespace lexbdd
