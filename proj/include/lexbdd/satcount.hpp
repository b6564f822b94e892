#pragma once

#include <lexbdd/store.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

namespace lexbdd {

using count_t = boost::multiprecision::cpp_int;

inline count_t pow2(std::uint32_t k) {
  count_t r = 1;
  r <<= k;
  return r;
}

/// Bits of an assignment, indexed by position in a Domain.
using Assignment = std::vector<bool>;

/// The ordered variables a set-valued BDD ranges over.
///
/// Counts, ranks and splits are taken over the domain only, so a store may
/// hold further variables (e.g. next-state copies) that the function does
/// not mention. Positions follow the store's level order.
class Domain {
public:
  static constexpr std::uint32_t npos = std::numeric_limits<std::uint32_t>::max();

  Domain() = default;

  Domain(const NodeStore &store, std::vector<var_t> vars) : vars_(std::move(vars)) {
    std::sort(vars_.begin(), vars_.end(),
              [&](var_t a, var_t b) { return store.level_of(a) < store.level_of(b); });
    position_.assign(store.num_vars(), npos);
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (position_[vars_[i]] != npos)
        throw contract_violation("domain lists variable " + std::to_string(vars_[i]) + " twice");
      position_[vars_[i]] = static_cast<std::uint32_t>(i);
    }
  }

  static Domain all(const NodeStore &store) {
    return Domain(store, std::vector<var_t>(store.order().begin(), store.order().end()));
  }

  std::uint32_t size() const noexcept { return static_cast<std::uint32_t>(vars_.size()); }
  var_t var(std::uint32_t pos) const { return vars_.at(pos); }
  std::span<const var_t> vars() const noexcept { return vars_; }
  bool contains(var_t v) const noexcept { return v < position_.size() && position_[v] != npos; }

  /// Position of the node `e` points to; sinks sit at size().
  std::uint32_t level(const NodeStore &store, Edge e) const {
    if (e.is_sink())
      return size();
    const var_t v = store.var_of(e);
    if (!contains(v))
      throw contract_violation("function depends on variable " + std::to_string(v) +
                               " outside its domain");
    return position_[v];
  }

  /// Expands a domain assignment into a per-variable vector for NodeStore::eval.
  std::vector<bool> to_store_values(const NodeStore &store, const Assignment &a) const {
    std::vector<bool> values(store.num_vars(), false);
    for (std::uint32_t i = 0; i < size(); ++i)
      values[vars_[i]] = a.at(i);
    return values;
  }

private:
  std::vector<var_t> vars_;
  std::vector<std::uint32_t> position_;
};

/// Satisfying-assignment counts for every signed edge reachable from a root.
///
/// Entry `e` holds the count over the sub-cube from level(e) down to the
/// sinks. A node reached both regularly and complemented carries two
/// entries, one per sign, so no stored value exceeds the root's count.
/// Completed tables are immutable.
class CountTable {
public:
  Edge root() const noexcept { return root_; }
  const Domain &domain() const noexcept { return domain_; }
  const NodeStore &store() const noexcept { return *store_; }
  std::uint32_t num_vars() const noexcept { return domain_.size(); }
  std::uint32_t level(Edge e) const { return domain_.level(*store_, e); }

  /// C_f: satisfying assignments over the whole domain.
  const count_t &root_count() const noexcept { return root_count_; }

  bool contains(Edge e) const { return entries_.contains(e.index()); }

  const count_t &lookup(Edge e) const {
    auto it = entries_.find(e.index());
    if (it == entries_.end())
      throw contract_violation("no satcount entry for edge " + std::to_string(e.index()));
    return it->second;
  }

  std::size_t entry_count() const noexcept { return entries_.size(); }

  template <class Fn> void for_each_entry(Fn &&fn) const {
    for (const auto &[index, value] : entries_)
      fn(Edge(index), value);
  }

private:
  friend CountTable precompute_satcount(const NodeStore &, Edge, Domain);

  const count_t &aux(Edge n) {
    if (auto it = entries_.find(n.index()); it != entries_.end())
      return it->second;
    const Edge t = store_->then_of(n);
    const Edge e = store_->else_of(n);
    const std::uint32_t i = level(n);
    const std::uint32_t j = level(t);
    const std::uint32_t k = level(e);
    if (!(i < j && i < k))
      throw contract_violation("domain order disagrees with the store order");
    count_t c = (aux(t) << (j - i - 1)) + (aux(e) << (k - i - 1));
    return entries_.emplace(n.index(), std::move(c)).first->second;
  }

  const NodeStore *store_ = nullptr;
  Domain domain_;
  Edge root_;
  count_t root_count_;
  std::unordered_map<std::int32_t, count_t> entries_;
};

/// Counts satisfying assignments of `f` over `domain`, caching the count of
/// every signed edge visited.
inline CountTable precompute_satcount(const NodeStore &store, Edge f, Domain domain) {
  CountTable table;
  table.store_ = &store;
  table.domain_ = std::move(domain);
  table.root_ = f;
  table.entries_.emplace(Edge::one().index(), count_t(1));
  table.entries_.emplace(Edge::zero().index(), count_t(0));
  const std::uint32_t i = table.level(f);
  table.root_count_ = table.aux(f) << i;
  for (const auto &[index, value] : table.entries_)
    if (value > table.root_count_ && index != Edge::one().index())
      throw std::logic_error("satcount entry exceeds the root count");
  return table;
}

inline CountTable precompute_satcount(const NodeStore &store, Edge f) {
  return precompute_satcount(store, f, Domain::all(store));
}

inline count_t satcount(const NodeStore &store, Edge f, const Domain &domain) {
  return precompute_satcount(store, f, domain).root_count();
}

} // namespace lexbdd
