#pragma once

#include <lexbdd/store.hpp>

#include <cctype>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lexbdd {

/// Malformed game description; carries the source position.
class spec_error : public std::runtime_error {
public:
  spec_error(const std::string &source, std::size_t line, std::size_t column,
             const std::string &message)
      : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                           ": " + message),
        line_(line), column_(column) {}
  explicit spec_error(const std::string &message) : std::runtime_error(message) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_ = 0;
  std::size_t column_ = 0;
};

/// Propositional formula over indexed state variables.
struct Formula {
  enum class Kind { Const, Var, Not, And, Or, Xor, Implies, Iff };

  Kind kind = Kind::Const;
  bool value = false;
  std::uint32_t var = 0;
  std::vector<Formula> args;

  static Formula constant(bool v) { return {Kind::Const, v, 0, {}}; }
  static Formula variable(std::uint32_t v) { return {Kind::Var, false, v, {}}; }
  static Formula unary(Kind k, Formula a) { return {k, false, 0, {std::move(a)}}; }
  static Formula binary(Kind k, Formula a, Formula b) {
    return {k, false, 0, {std::move(a), std::move(b)}};
  }
};

inline bool evaluate(const Formula &f, const std::vector<bool> &state) {
  switch (f.kind) {
  case Formula::Kind::Const:
    return f.value;
  case Formula::Kind::Var:
    return state.at(f.var);
  case Formula::Kind::Not:
    return !evaluate(f.args[0], state);
  case Formula::Kind::And:
    return evaluate(f.args[0], state) && evaluate(f.args[1], state);
  case Formula::Kind::Or:
    return evaluate(f.args[0], state) || evaluate(f.args[1], state);
  case Formula::Kind::Xor:
    return evaluate(f.args[0], state) != evaluate(f.args[1], state);
  case Formula::Kind::Implies:
    return !evaluate(f.args[0], state) || evaluate(f.args[1], state);
  case Formula::Kind::Iff:
    return evaluate(f.args[0], state) == evaluate(f.args[1], state);
  }
  return false;
}

/// BDD of `f` with state variable i mapped to store variable var_of(i).
inline Edge to_bdd(NodeStore &store, const Formula &f,
                   const std::function<var_t(std::uint32_t)> &var_of) {
  const auto arg = [&](std::size_t i) { return to_bdd(store, f.args[i], var_of); };
  switch (f.kind) {
  case Formula::Kind::Const:
    return f.value ? Edge::one() : Edge::zero();
  case Formula::Kind::Var:
    return store.var(var_of(f.var));
  case Formula::Kind::Not:
    return !arg(0);
  case Formula::Kind::And:
    return store.conj(arg(0), arg(1));
  case Formula::Kind::Or:
    return store.disj(arg(0), arg(1));
  case Formula::Kind::Xor:
    return store.exor(arg(0), arg(1));
  case Formula::Kind::Implies:
    return store.disj(!arg(0), arg(1));
  case Formula::Kind::Iff:
    return store.iff(arg(0), arg(1));
  }
  return Edge::zero();
}

/// Recursive-descent parser. Binding from loosest to tightest:
///   <-> / ↔,  -> / → (right-assoc),  | / ∨,  ^ / ⊕,  & / ∧,  ! / ~ / ¬
/// Atoms are identifiers, true/false/1/0 and parenthesised formulas.
class FormulaParser {
public:
  using Lookup = std::function<std::optional<std::uint32_t>(std::string_view)>;

  FormulaParser(std::string_view text, Lookup lookup, std::string source = "<formula>",
                std::size_t line = 1, std::size_t column_offset = 0)
      : text_(text), lookup_(std::move(lookup)), source_(std::move(source)), line_(line),
        column_offset_(column_offset) {}

  Formula parse() {
    Formula f = parse_iff();
    skip_space();
    if (pos_ != text_.size())
      fail("unexpected '" + std::string(text_.substr(pos_, 1)) + "'");
    return f;
  }

private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(std::initializer_list<std::string_view> tokens) {
    skip_space();
    for (std::string_view t : tokens) {
      if (text_.substr(pos_).starts_with(t)) {
        pos_ += t.size();
        return true;
      }
    }
    return false;
  }

  [[noreturn]] void fail(const std::string &message) const {
    throw spec_error(source_, line_, column_offset_ + pos_ + 1, message);
  }

  Formula parse_iff() {
    Formula lhs = parse_implies();
    while (accept({"<->", "↔"}))
      lhs = Formula::binary(Formula::Kind::Iff, std::move(lhs), parse_implies());
    return lhs;
  }

  Formula parse_implies() {
    Formula lhs = parse_or();
    if (accept({"->", "→"}))
      return Formula::binary(Formula::Kind::Implies, std::move(lhs), parse_implies());
    return lhs;
  }

  Formula parse_or() {
    Formula lhs = parse_xor();
    while (accept({"|", "∨"}))
      lhs = Formula::binary(Formula::Kind::Or, std::move(lhs), parse_xor());
    return lhs;
  }

  Formula parse_xor() {
    Formula lhs = parse_and();
    while (accept({"^", "⊕"}))
      lhs = Formula::binary(Formula::Kind::Xor, std::move(lhs), parse_and());
    return lhs;
  }

  Formula parse_and() {
    Formula lhs = parse_unary();
    while (accept({"&", "∧"}))
      lhs = Formula::binary(Formula::Kind::And, std::move(lhs), parse_unary());
    return lhs;
  }

  Formula parse_unary() {
    if (accept({"!", "~", "¬"}))
      return Formula::unary(Formula::Kind::Not, parse_unary());
    return parse_atom();
  }

  Formula parse_atom() {
    skip_space();
    if (pos_ >= text_.size())
      fail("unexpected end of formula");
    if (accept({"("})) {
      Formula inner = parse_iff();
      if (!accept({")"}))
        fail("expected ')'");
      return inner;
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (start == pos_)
      fail("expected a variable, constant or '('");
    const std::string_view word = text_.substr(start, pos_ - start);
    if (word == "true" || word == "1")
      return Formula::constant(true);
    if (word == "false" || word == "0")
      return Formula::constant(false);
    if (auto v = lookup_(word))
      return Formula::variable(*v);
    pos_ = start;
    fail("unknown variable '" + std::string(word) + "'");
  }

  std::string_view text_;
  Lookup lookup_;
  std::string source_;
  std::size_t line_;
  std::size_t column_offset_;
  std::size_t pos_ = 0;
};

} // namespace lexbdd
