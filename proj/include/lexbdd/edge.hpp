#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>

namespace lexbdd {

using var_t = std::uint32_t;

/// Signed reference to a node slot in a NodeStore.
///
/// The magnitude is the slot index, the sign is the complement flag. Slot 1
/// is the single physical sink: +1 is the 1-sink and -1 is the 0-sink.
class Edge {
public:
  constexpr Edge() noexcept = default;
  constexpr explicit Edge(std::int32_t index) noexcept : index_(index) {}

  static constexpr Edge one() noexcept { return Edge(1); }
  static constexpr Edge zero() noexcept { return Edge(-1); }

  constexpr std::int32_t index() const noexcept { return index_; }
  constexpr std::uint32_t slot() const noexcept {
    return static_cast<std::uint32_t>(index_ < 0 ? -index_ : index_);
  }
  constexpr bool complemented() const noexcept { return index_ < 0; }
  constexpr int sign() const noexcept { return index_ < 0 ? -1 : 1; }
  constexpr bool is_sink() const noexcept { return slot() == 1; }
  constexpr bool is_one() const noexcept { return index_ == 1; }
  constexpr bool is_zero() const noexcept { return index_ == -1; }

  constexpr Edge regular() const noexcept { return Edge(static_cast<std::int32_t>(slot())); }
  /// Applies the sign of `parent` to this edge (`sign(n) * Then(|n|)`).
  constexpr Edge signed_by(Edge parent) const noexcept {
    return parent.complemented() ? Edge(-index_) : *this;
  }

  constexpr Edge operator!() const noexcept { return Edge(-index_); }

  friend constexpr bool operator==(Edge, Edge) noexcept = default;
  friend constexpr auto operator<=>(Edge, Edge) noexcept = default;

private:
  std::int32_t index_ = 0;
};

/// A precondition of an operation was violated by the caller.
class contract_violation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// An assignment handed to rank() does not satisfy the ranked function.
class not_a_member : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A node or time budget installed on the store ran out mid-operation.
class budget_exhausted : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The store ran out of addressable slots.
class store_overflow : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace lexbdd

template <> struct std::hash<lexbdd::Edge> {
  std::size_t operator()(lexbdd::Edge e) const noexcept {
    return std::hash<std::int32_t>{}(e.index());
  }
};
