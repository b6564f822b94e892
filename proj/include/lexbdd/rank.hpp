#pragma once

#include <lexbdd/satcount.hpp>

#include <optional>
#include <stdexcept>

namespace lexbdd {

/// Node visits of the last rank/unrank walk; bounded by the domain size.
struct WalkStats {
  std::uint32_t visits = 0;
};

namespace detail {

/// Value of bits [from, to) read as a binary number, first bit most significant.
inline count_t bin(const Assignment &s, std::uint32_t from, std::uint32_t to) {
  count_t v = 0;
  for (std::uint32_t p = from; p < to; ++p) {
    v <<= 1;
    if (s[p])
      v |= 1;
  }
  return v;
}

/// Writes `value` into bits [from, to), first bit most significant.
inline void invbin(Assignment &s, std::uint32_t from, std::uint32_t to, const count_t &value) {
  for (std::uint32_t p = from; p < to; ++p)
    s[p] = boost::multiprecision::bit_test(value, to - 1 - p);
}

inline std::optional<count_t> rank_walk(const CountTable &table, const Assignment &s,
                                        WalkStats *stats) {
  const NodeStore &store = table.store();
  if (s.size() != table.num_vars())
    throw contract_violation("assignment length " + std::to_string(s.size()) +
                             " differs from domain size " + std::to_string(table.num_vars()));
  Edge n = table.root();
  count_t acc = bin(s, 0, table.level(n)) * table.lookup(n);
  std::uint32_t visits = 0;
  while (!n.is_sink()) {
    ++visits;
    const Edge t = store.then_of(n);
    const Edge e = store.else_of(n);
    const std::uint32_t i = table.level(n);
    const std::uint32_t j = table.level(e);
    const std::uint32_t k = table.level(t);
    if (!s[i]) {
      acc += bin(s, i + 1, j) * table.lookup(e);
      n = e;
    } else {
      acc += (table.lookup(e) << (j - i - 1)) + bin(s, i + 1, k) * table.lookup(t);
      n = t;
    }
  }
  if (stats)
    stats->visits = visits;
  if (n.is_zero())
    return std::nullopt;
  // rankAux(1-sink) contributes 1, the final -1 makes ranks 0-based.
  return acc;
}

} // namespace detail

/// Position of `s` among the satisfying assignments of the table's root in
/// lexicographic order, 0-based. Throws not_a_member if `s` is not one.
inline count_t rank(const CountTable &table, const Assignment &s, WalkStats *stats = nullptr) {
  auto r = detail::rank_walk(table, s, stats);
  if (!r)
    throw not_a_member("assignment does not satisfy the ranked function");
  return std::move(*r);
}

inline std::optional<count_t> member_rank_or_none(const CountTable &table, const Assignment &s) {
  return detail::rank_walk(table, s, nullptr);
}

/// Inverse of rank(): the satisfying assignment at position `r`.
inline Assignment unrank(const CountTable &table, count_t r, WalkStats *stats = nullptr) {
  if (r < 0 || r >= table.root_count())
    throw std::out_of_range("rank " + r.str() + " outside [0, " + table.root_count().str() + ")");
  const NodeStore &store = table.store();
  Assignment s(table.num_vars(), false);
  Edge n = table.root();
  std::uint32_t i = table.level(n);
  detail::invbin(s, 0, i, r / table.lookup(n));
  std::uint32_t visits = 0;
  while (!n.is_sink()) {
    ++visits;
    r %= table.lookup(n);
    const Edge t = store.then_of(n);
    const Edge e = store.else_of(n);
    const std::uint32_t j = table.level(e);
    const std::uint32_t k = table.level(t);
    const count_t else_mass = table.lookup(e) << (j - i - 1);
    if (r < else_mass) {
      s[i] = false;
      detail::invbin(s, i + 1, j, r / table.lookup(e));
      n = e;
      i = j;
    } else {
      s[i] = true;
      r -= else_mass;
      detail::invbin(s, i + 1, k, r / table.lookup(t));
      n = t;
      i = k;
    }
  }
  if (stats)
    stats->visits = visits;
  return s;
}

} // namespace lexbdd
