#pragma once

#include <lexbdd/split.hpp>

#include <chrono>
#include <charconv>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace lexbdd {

/// How a state set is cut into pieces before the per-action image loop.
struct PartitionStrategy {
  enum class Kind { None, FoldStatesLex, StatesLex, DisjVar };

  Kind kind = Kind::None;
  std::uint64_t param = 0;

  static PartitionStrategy none() { return {}; }
  static PartitionStrategy fold_states_lex(std::uint64_t k) { return {Kind::FoldStatesLex, k}; }
  static PartitionStrategy states_lex(std::uint64_t bound) { return {Kind::StatesLex, bound}; }
  static PartitionStrategy disj_var() { return {Kind::DisjVar, 0}; }

  std::string to_string() const {
    switch (kind) {
    case Kind::None:
      return "none";
    case Kind::FoldStatesLex:
      return "fold-states-lex:" + std::to_string(param);
    case Kind::StatesLex:
      return "states-lex:" + std::to_string(param);
    case Kind::DisjVar:
      return "disj-var";
    }
    return "none";
  }

  /// Parses `none`, `fold-states-lex:K`, `states-lex:BOUND` or `disj-var`.
  static PartitionStrategy parse(std::string_view text) {
    if (text == "none")
      return none();
    if (text == "disj-var")
      return disj_var();
    const auto parse_param = [&](std::string_view prefix) -> std::optional<std::uint64_t> {
      if (!text.starts_with(prefix))
        return std::nullopt;
      const std::string_view digits = text.substr(prefix.size());
      std::uint64_t v = 0;
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
      if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size() || v == 0)
        throw std::invalid_argument("bad partition parameter in '" + std::string(text) +
                                    "' (expected a positive integer)");
      return v;
    };
    if (auto k = parse_param("fold-states-lex:"))
      return fold_states_lex(*k);
    if (auto b = parse_param("states-lex:"))
      return states_lex(*b);
    throw std::invalid_argument("unknown partition strategy '" + std::string(text) + "'");
  }

  friend bool operator==(const PartitionStrategy &, const PartitionStrategy &) = default;
};

/// Cuts `s` according to `strategy`. Empty pieces are dropped.
inline std::vector<Edge> partition_set(NodeStore &store, const Domain &domain, Edge s,
                                       const PartitionStrategy &strategy) {
  std::vector<Edge> parts;
  switch (strategy.kind) {
  case PartitionStrategy::Kind::None:
    parts.push_back(s);
    break;
  case PartitionStrategy::Kind::FoldStatesLex:
    parts = fold_states_lex(store, precompute_satcount(store, s, domain), strategy.param).parts;
    break;
  case PartitionStrategy::Kind::StatesLex:
    parts = states_lex_bounded(store, precompute_satcount(store, s, domain),
                               count_t(strategy.param))
                .parts;
    break;
  case PartitionStrategy::Kind::DisjVar: {
    const SplitPair p = disj_var(store, s);
    parts = {p.left, p.right};
    break;
  }
  }
  std::erase_if(parts, [](Edge e) { return e.is_zero(); });
  return parts;
}

/// Current-state variables, their next-state copies, and one relation per
/// action over both. The overall relation is the disjunction of the
/// per-action relations and is never built.
class TransitionSystem {
public:
  TransitionSystem(const NodeStore &store, std::vector<var_t> current, std::vector<var_t> next,
                   std::vector<Edge> relations)
      : current_(std::move(current)), next_(std::move(next)), relations_(std::move(relations)) {
    if (current_.size() != next_.size())
      throw contract_violation("current and next variable lists differ in length");
    for (std::size_t i = 0; i < current_.size(); ++i) {
      to_next_.emplace_back(current_[i], next_[i]);
      to_current_.emplace_back(next_[i], current_[i]);
    }
    domain_ = Domain(store, current_);
  }

  std::span<const var_t> current() const noexcept { return current_; }
  std::span<const var_t> next() const noexcept { return next_; }
  std::span<const Edge> relations() const noexcept { return relations_; }
  const Domain &state_domain() const noexcept { return domain_; }
  std::span<const std::pair<var_t, var_t>> to_next() const noexcept { return to_next_; }
  std::span<const std::pair<var_t, var_t>> to_current() const noexcept { return to_current_; }

private:
  std::vector<var_t> current_;
  std::vector<var_t> next_;
  std::vector<Edge> relations_;
  std::vector<std::pair<var_t, var_t>> to_next_;
  std::vector<std::pair<var_t, var_t>> to_current_;
  Domain domain_;
};

struct ImageStats {
  std::size_t subimages = 0;
  /// Sum of node counts over all sub-images.
  std::size_t total_nodes = 0;
  /// Largest node count of a single sub-image.
  std::size_t max_image_nodes = 0;

  void merge(const ImageStats &o) {
    subimages += o.subimages;
    total_nodes += o.total_nodes;
    max_image_nodes = std::max(max_image_nodes, o.max_image_nodes);
  }
};

/// Disjunction of `fs`, always joining the two smallest operands first.
inline Edge disjoin_balanced(NodeStore &store, std::vector<Edge> fs) {
  using Item = std::tuple<std::size_t, std::size_t, Edge>; // size, sequence, function
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  std::size_t seq = 0;
  for (Edge f : fs)
    heap.emplace(store.dag_size(f), seq++, f);
  if (heap.empty())
    return Edge::zero();
  while (heap.size() > 1) {
    const Edge a = std::get<2>(heap.top());
    heap.pop();
    const Edge b = std::get<2>(heap.top());
    heap.pop();
    const Edge u = store.disj(a, b);
    heap.emplace(store.dag_size(u), seq++, u);
  }
  return std::get<2>(heap.top());
}

namespace detail {

inline Edge relational_union(NodeStore &store, std::span<const Edge> relations,
                             std::span<const var_t> quantified, std::span<const Edge> parts,
                             ImageStats *stats) {
  std::vector<Edge> subimages;
  ImageStats local;
  for (Edge part : parts) {
    if (part.is_zero())
      continue;
    for (Edge rel : relations) {
      store.check_deadline();
      const Edge r = store.and_exists(quantified, rel, part);
      const std::size_t size = store.dag_size(r);
      ++local.subimages;
      local.total_nodes += size;
      local.max_image_nodes = std::max(local.max_image_nodes, size);
      if (!r.is_zero())
        subimages.push_back(r);
    }
  }
  if (stats)
    stats->merge(local);
  return disjoin_balanced(store, std::move(subimages));
}

} // namespace detail

/// Successors of the union of `parts`, each part a set over current variables.
inline Edge image(NodeStore &store, const TransitionSystem &ts, std::span<const Edge> parts,
                  ImageStats *stats = nullptr) {
  const Edge next =
      detail::relational_union(store, ts.relations(), ts.current(), parts, stats);
  return store.rename(next, ts.to_current());
}

inline Edge image(NodeStore &store, const TransitionSystem &ts, Edge s,
                  const PartitionStrategy &strategy = {}, ImageStats *stats = nullptr) {
  const std::vector<Edge> parts = partition_set(store, ts.state_domain(), s, strategy);
  return image(store, ts, parts, stats);
}

/// Predecessors of the union of `parts`, each part a set over current variables.
inline Edge preimage(NodeStore &store, const TransitionSystem &ts, std::span<const Edge> parts,
                     ImageStats *stats = nullptr) {
  std::vector<Edge> primed;
  primed.reserve(parts.size());
  for (Edge p : parts)
    primed.push_back(store.rename(p, ts.to_next()));
  return detail::relational_union(store, ts.relations(), ts.next(), primed, stats);
}

inline Edge preimage(NodeStore &store, const TransitionSystem &ts, Edge s,
                     const PartitionStrategy &strategy = {}, ImageStats *stats = nullptr) {
  const std::vector<Edge> parts = partition_set(store, ts.state_domain(), s, strategy);
  return preimage(store, ts, parts, stats);
}

/// Resource limits installed on a store for the duration of a search.
struct Budget {
  std::optional<std::chrono::steady_clock::time_point> deadline;
  std::optional<std::size_t> node_limit;

  static Budget unlimited() { return {}; }
  static Budget from(std::chrono::duration<double> time, std::size_t nodes) {
    return {std::chrono::steady_clock::now() +
                std::chrono::duration_cast<std::chrono::steady_clock::duration>(time),
            nodes};
  }
};

/// Installs a Budget on a store and restores the previous limits on exit.
class BudgetScope {
public:
  BudgetScope(NodeStore &store, const Budget &budget)
      : store_(store), saved_limit_(store.node_limit()) {
    store_.set_deadline(budget.deadline);
    if (budget.node_limit)
      store_.set_node_limit(*budget.node_limit);
  }
  ~BudgetScope() {
    store_.set_deadline(std::nullopt);
    store_.set_node_limit(saved_limit_);
  }
  BudgetScope(const BudgetScope &) = delete;
  BudgetScope &operator=(const BudgetScope &) = delete;

private:
  NodeStore &store_;
  std::size_t saved_limit_;
};

struct LayerMetrics {
  double time_ms = 0;
  std::size_t total_nodes = 0;
  std::size_t max_image_nodes = 0;
  count_t states;
};

struct LayerSequence {
  std::vector<Edge> layers;
  std::vector<LayerMetrics> metrics;
  bool complete = false;
  std::string stop_reason;
};

inline double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since)
      .count();
}

/// Breadth-first search storing each depth as its own layer. A new layer is
/// the image of the previous one minus every state seen before; the search
/// stops at the fix-point or when the budget runs out.
inline LayerSequence layered_bfs(NodeStore &store, const TransitionSystem &ts, Edge init,
                                 const PartitionStrategy &strategy = {},
                                 const Budget &budget = Budget::unlimited()) {
  if (init.is_zero())
    throw contract_violation("layered_bfs needs a nonempty initial set");
  BudgetScope scope(store, budget);
  const Domain &domain = ts.state_domain();
  LayerSequence seq;
  seq.layers.push_back(init);
  seq.metrics.push_back({0.0, store.dag_size(init), 0, satcount(store, init, domain)});
  Edge reached = init;
  try {
    for (;;) {
      const auto start = std::chrono::steady_clock::now();
      ImageStats stats;
      const Edge succ = image(store, ts, seq.layers.back(), strategy, &stats);
      const Edge fresh = store.diff(succ, reached);
      if (fresh.is_zero()) {
        seq.complete = true;
        break;
      }
      reached = store.disj(reached, fresh);
      const double ms = elapsed_ms(start);
      seq.layers.push_back(fresh);
      seq.metrics.push_back(
          {ms, stats.total_nodes, stats.max_image_nodes, satcount(store, fresh, domain)});
    }
  } catch (const budget_exhausted &e) {
    seq.complete = false;
    seq.stop_reason = e.what();
  }
  return seq;
}

} // namespace lexbdd
