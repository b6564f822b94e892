#pragma once

#include <lexbdd/formula.hpp>
#include <lexbdd/search.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace lexbdd {

struct GameAction {
  int player = 1;
  std::string name;
  Formula pre;
  std::vector<std::pair<std::uint32_t, Formula>> effects;
};

struct GameReward {
  int player = 1;
  int value = 0;
  Formula condition;
};

/// Declarative one- or two-player game over boolean state variables.
struct GameSpec {
  std::string name;
  int players = 1;
  std::vector<std::string> vars;
  std::vector<bool> init;
  std::vector<GameAction> actions;
  Formula terminal;
  std::vector<GameReward> rewards;

  std::optional<std::uint32_t> var_index(std::string_view name) const {
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i] == name)
        return static_cast<std::uint32_t>(i);
    return std::nullopt;
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_on(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

inline std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
      ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])))
      ++i;
    if (i > start)
      out.push_back(s.substr(start, i - start));
  }
  return out;
}

inline bool is_identifier(std::string_view w) {
  if (w.empty() || std::isdigit(static_cast<unsigned char>(w.front())))
    return false;
  return std::all_of(w.begin(), w.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

class GameParser {
public:
  GameParser(std::string_view text, std::string source) : text_(text), source_(std::move(source)) {}

  GameSpec parse() {
    std::size_t line_no = 0;
    std::string pending;
    std::size_t pending_line = 0;
    std::istringstream in{std::string(text_)};
    for (std::string raw; std::getline(in, raw);) {
      ++line_no;
      if (auto hash = raw.find('#'); hash != std::string::npos)
        raw.erase(hash);
      while (!raw.empty() && (raw.back() == '\r' || raw.back() == ' ' || raw.back() == '\t'))
        raw.pop_back();
      if (pending.empty())
        pending_line = line_no;
      if (!raw.empty() && raw.back() == '\\') {
        raw.pop_back();
        pending += raw + " ";
        continue;
      }
      pending += raw;
      if (!trim(pending).empty())
        statement(pending, pending_line);
      pending.clear();
    }
    if (!trim(pending).empty())
      statement(pending, pending_line);
    finish();
    return std::move(spec_);
  }

private:
  [[noreturn]] void fail(std::size_t line, std::size_t column, const std::string &msg) const {
    throw spec_error(source_, line, column, msg);
  }

  std::size_t column_of(std::string_view line, std::string_view part) const {
    return static_cast<std::size_t>(part.data() - line.data()) + 1;
  }

  Formula formula(std::string_view line, std::string_view part, std::size_t line_no) const {
    if (!vars_seen_)
      fail(line_no, column_of(line, part), "formula before the vars: section");
    const std::size_t offset = static_cast<std::size_t>(part.data() - line.data());
    FormulaParser p(part, [this](std::string_view w) { return spec_.var_index(w); }, source_,
                    line_no, offset);
    return p.parse();
  }

  int player_number(std::string_view line, std::string_view w, std::size_t line_no) const {
    if (w == "1")
      return 1;
    if (w == "2")
      return 2;
    fail(line_no, column_of(line, w), "player must be 1 or 2, got '" + std::string(w) + "'");
  }

  void statement(const std::string &text, std::size_t line_no) {
    const std::string_view line(text);
    const auto colon = line.find(':');
    const std::string_view head = trim(line.substr(0, colon));
    const std::vector<std::string_view> hw = words(head);
    if (hw.empty())
      fail(line_no, 1, "empty statement");
    const std::string_view keyword = hw[0];

    if (keyword == "game" && colon == std::string_view::npos) {
      if (hw.size() != 2)
        fail(line_no, 1, "expected 'game <name>'");
      spec_.name = std::string(hw[1]);
      return;
    }
    if (colon == std::string_view::npos)
      fail(line_no, 1, "expected ':' in statement '" + std::string(keyword) + "'");
    const std::string_view body = line.substr(colon + 1);

    if (keyword == "players" && hw.size() == 1) {
      const auto w = words(body);
      if (w.size() != 1)
        fail(line_no, column_of(line, body), "expected 'players: 1' or 'players: 2'");
      declared_players_ = player_number(line, w[0], line_no);
    } else if (keyword == "vars" && hw.size() == 1) {
      if (vars_seen_)
        fail(line_no, 1, "duplicate vars: section");
      for (std::string_view w : words(body)) {
        if (!is_identifier(w) || w == "true" || w == "false")
          fail(line_no, column_of(line, w), "bad variable name '" + std::string(w) + "'");
        if (spec_.var_index(w))
          fail(line_no, column_of(line, w), "variable '" + std::string(w) + "' declared twice");
        spec_.vars.emplace_back(w);
      }
      if (spec_.vars.empty())
        fail(line_no, column_of(line, body), "vars: section declares no variables");
      spec_.init.assign(spec_.vars.size(), false);
      vars_seen_ = true;
    } else if (keyword == "init" && hw.size() == 1) {
      if (!vars_seen_)
        fail(line_no, 1, "init: before vars:");
      for (std::string_view w : words(body)) {
        const auto v = spec_.var_index(w);
        if (!v)
          fail(line_no, column_of(line, w), "unknown variable '" + std::string(w) + "'");
        spec_.init[*v] = true;
      }
    } else if (keyword == "player" && hw.size() == 4 && hw[2] == "action") {
      action(line, body, hw, line_no);
    } else if (keyword == "terminal" && hw.size() == 1) {
      if (terminal_seen_)
        fail(line_no, 1, "duplicate terminal: section");
      spec_.terminal = formula(line, body, line_no);
      terminal_seen_ = true;
    } else if (keyword == "reward" && hw.size() == 3) {
      GameReward r;
      r.player = player_number(line, hw[1], line_no);
      int value = -1;
      try {
        std::size_t used = 0;
        value = std::stoi(std::string(hw[2]), &used);
        if (used != hw[2].size())
          value = -1;
      } catch (const std::exception &) {
      }
      if (value < 0 || value > 100)
        fail(line_no, column_of(line, hw[2]), "reward must be an integer in 0..100");
      r.value = value;
      r.condition = formula(line, body, line_no);
      spec_.rewards.push_back(std::move(r));
    } else {
      fail(line_no, 1, "unknown statement '" + std::string(head) + "'");
    }
  }

  void action(std::string_view line, std::string_view body,
              const std::vector<std::string_view> &hw, std::size_t line_no) {
    GameAction a;
    a.player = player_number(line, hw[1], line_no);
    a.name = std::string(hw[3]);
    a.pre = Formula::constant(true);
    bool have_pre = false;
    for (std::string_view clause : split_on(body, ';')) {
      const std::string_view c = trim(clause);
      if (c.empty())
        continue;
      const auto eq = c.find('=');
      const std::string_view key = trim(c.substr(0, eq));
      if (eq == std::string_view::npos || (key != "pre" && key != "eff"))
        fail(line_no, column_of(line, c), "expected 'pre = <formula>' or 'eff = <assignments>'");
      const std::string_view rhs = c.substr(eq + 1);
      if (key == "pre") {
        if (have_pre)
          fail(line_no, column_of(line, c), "duplicate pre clause");
        a.pre = formula(line, rhs, line_no);
        have_pre = true;
        continue;
      }
      std::vector<bool> assigned(spec_.vars.size(), false);
      for (std::string_view item : split_on(rhs, ',')) {
        const auto assign = item.find(":=");
        if (assign == std::string_view::npos)
          fail(line_no, column_of(line, item), "expected '<var> := <formula>'");
        const std::string_view target = trim(item.substr(0, assign));
        const auto v = spec_.var_index(target);
        if (!v)
          fail(line_no, column_of(line, item),
               "unknown variable '" + std::string(target) + "'");
        if (assigned[*v])
          fail(line_no, column_of(line, item),
               "variable '" + std::string(target) + "' assigned twice");
        assigned[*v] = true;
        a.effects.emplace_back(*v, formula(line, item.substr(assign + 2), line_no));
      }
    }
    spec_.actions.push_back(std::move(a));
  }

  void finish() {
    if (!vars_seen_)
      throw spec_error(source_ + ": missing vars: section");
    if (!terminal_seen_)
      throw spec_error(source_ + ": missing terminal: section");
    int players = declared_players_;
    for (const auto &a : spec_.actions)
      players = std::max(players, a.player);
    for (const auto &r : spec_.rewards)
      players = std::max(players, r.player);
    if (declared_players_ != 0 && players > declared_players_)
      throw spec_error(source_ + ": player index exceeds players: " +
                       std::to_string(declared_players_));
    spec_.players = std::max(players, 1);
    for (int p = 1; p <= spec_.players; ++p) {
      const bool has = std::any_of(spec_.rewards.begin(), spec_.rewards.end(),
                                   [p](const GameReward &r) { return r.player == p; });
      if (!has)
        throw spec_error(source_ + ": no reward lines for player " + std::to_string(p));
    }
    if (spec_.name.empty())
      spec_.name = "game";
  }

  std::string_view text_;
  std::string source_;
  GameSpec spec_;
  bool vars_seen_ = false;
  bool terminal_seen_ = false;
  int declared_players_ = 0;
};

} // namespace detail

inline GameSpec parse_game(std::string_view text, std::string source = "<game>") {
  return detail::GameParser(text, std::move(source)).parse();
}

inline GameSpec load_game(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open game file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_game(ss.str(), path.filename().string());
}

/// Terminal states sharing one reward vector (one entry per player).
struct RewardClass {
  std::vector<int> values;
  Edge states;
};

/// A game lowered onto a store with interleaved x_i / x'_i variables.
struct CompiledGame {
  TransitionSystem ts;
  Edge init;
  Edge terminal;
  /// Non-terminal states where player p (0-based) has a legal action.
  std::vector<Edge> to_move;
  std::vector<RewardClass> classes;
  /// Class indices in the preference order of player p (0-based).
  std::vector<std::vector<std::size_t>> preference;
  int players = 1;
};

inline var_t current_var(std::uint32_t i) { return 2 * i; }
inline var_t next_var(std::uint32_t i) { return 2 * i + 1; }

/// Store sized for `spec`: x_0 x'_0 x_1 x'_1 ...
inline NodeStore make_game_store(const GameSpec &spec) { return NodeStore(2 * spec.vars.size()); }

/// Builds one transition relation per action:
///   not terminal AND pre AND (x'_i <-> eff_i) AND (x'_j <-> x_j) for untouched j.
inline CompiledGame compile(NodeStore &store, const GameSpec &spec) {
  const auto n = static_cast<std::uint32_t>(spec.vars.size());
  if (store.num_vars() < 2 * n)
    throw contract_violation("store has too few variables for game " + spec.name);
  const auto cur = [](std::uint32_t i) { return current_var(i); };
  const Edge terminal = to_bdd(store, spec.terminal, cur);

  std::vector<Edge> relations;
  std::vector<Edge> legal(static_cast<std::size_t>(spec.players), Edge::zero());
  for (const GameAction &a : spec.actions) {
    std::vector<const Formula *> effect(n, nullptr);
    for (const auto &[v, f] : a.effects)
      effect[v] = &f;
    Edge frame = Edge::one();
    for (std::uint32_t i = n; i-- > 0;) {
      const Edge value = effect[i] ? to_bdd(store, *effect[i], cur) : store.var(cur(i));
      frame = store.conj(store.iff(store.var(next_var(i)), value), frame);
    }
    const Edge enabled = store.conj(!terminal, to_bdd(store, a.pre, cur));
    relations.push_back(store.conj(enabled, frame));
    legal[a.player - 1] = store.disj(legal[a.player - 1], enabled);
  }
  if (spec.players == 2 && !store.conj(legal[0], legal[1]).is_zero())
    throw spec_error(spec.name + ": both players can move in some state; "
                                 "alternation must be encoded in the preconditions");

  // Reward formulas per player, grouped by value.
  std::vector<std::map<int, Edge, std::greater<>>> by_value(spec.players);
  for (const GameReward &r : spec.rewards) {
    Edge &slot = by_value[r.player - 1].try_emplace(r.value, Edge::zero()).first->second;
    slot = store.disj(slot, to_bdd(store, r.condition, cur));
  }
  for (int p = 0; p < spec.players; ++p) {
    Edge covered = Edge::zero();
    for (const auto &[value, f] : by_value[p]) {
      if (!store.conj(store.conj(terminal, f), covered).is_zero())
        throw spec_error(spec.name + ": reward formulas of player " + std::to_string(p + 1) +
                         " overlap on terminal states");
      covered = store.disj(covered, f);
    }
    if (!store.diff(terminal, covered).is_zero())
      throw spec_error(spec.name + ": reward formulas of player " + std::to_string(p + 1) +
                       " do not cover every terminal state");
  }

  std::vector<RewardClass> classes;
  if (spec.players == 1) {
    for (const auto &[v, f] : by_value[0])
      classes.push_back({{v}, store.conj(terminal, f)});
  } else {
    for (const auto &[v1, f1] : by_value[0])
      for (const auto &[v2, f2] : by_value[1]) {
        const Edge states = store.conj(terminal, store.conj(f1, f2));
        if (!states.is_zero())
          classes.push_back({{v1, v2}, states});
      }
  }

  std::vector<std::vector<std::size_t>> preference(spec.players);
  for (int p = 0; p < spec.players; ++p) {
    auto &order = preference[p];
    order.resize(classes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const auto &va = classes[a].values;
      const auto &vb = classes[b].values;
      if (va[p] != vb[p])
        return va[p] > vb[p];
      if (spec.players == 2)
        return va[1 - p] > vb[1 - p];
      return false;
    });
  }

  Edge init = Edge::one();
  for (std::uint32_t i = n; i-- > 0;)
    init = store.conj(spec.init[i] ? store.var(cur(i)) : !store.var(cur(i)), init);

  std::vector<var_t> current, next;
  for (std::uint32_t i = 0; i < n; ++i) {
    current.push_back(current_var(i));
    next.push_back(next_var(i));
  }
  return CompiledGame{TransitionSystem(store, std::move(current), std::move(next),
                                       std::move(relations)),
                      init,
                      terminal,
                      std::move(legal),
                      std::move(classes),
                      std::move(preference),
                      spec.players};
}

/// Game values for every reachable state, one BDD per (layer, class).
struct SolutionTable {
  /// by_layer[d][c]: states of layer d whose value is classes[c]. Empty for
  /// layers the solver did not reach.
  std::vector<std::vector<Edge>> by_layer;
  std::vector<std::vector<int>> class_values;
  /// Metrics of the solved layers, in solving order (last layer first).
  std::vector<std::pair<std::size_t, LayerMetrics>> metrics;
  bool complete = false;
  std::string stop_reason;
};

/// A layer still holds states no reward class could be assigned to.
class unsolvable_layer : public std::runtime_error {
public:
  unsolvable_layer(std::size_t layer, const std::string &detail)
      : std::runtime_error("layer " + std::to_string(layer) + ": " + detail), layer_(layer) {}
  std::size_t layer() const noexcept { return layer_; }

private:
  std::size_t layer_;
};

/// Retrograde classification from the last layer back to the initial state.
/// Every move must lead from layer d into layer d + 1, which holds when the
/// state determines the number of moves played.
/// Terminal states take their reward class directly; the remaining states of
/// each player are matched against the preimages of the next layer's
/// classes in that player's preference order.
inline SolutionTable solve(NodeStore &store, const CompiledGame &game, const LayerSequence &layers,
                           const PartitionStrategy &strategy = {},
                           const Budget &budget = Budget::unlimited()) {
  if (!layers.complete)
    throw contract_violation("solve needs a complete layer sequence");
  BudgetScope scope(store, budget);
  const std::size_t depth = layers.layers.size();
  const std::size_t num_classes = game.classes.size();
  SolutionTable sol;
  sol.by_layer.assign(depth, {});
  for (const RewardClass &c : game.classes)
    sol.class_values.push_back(c.values);

  try {
    for (std::size_t d = depth; d-- > 0;) {
      const auto start = std::chrono::steady_clock::now();
      const Edge layer = layers.layers[d];
      std::vector<Edge> cls(num_classes, Edge::zero());
      const Edge term = store.conj(layer, game.terminal);
      for (std::size_t c = 0; c < num_classes; ++c)
        cls[c] = store.conj(term, game.classes[c].states);

      ImageStats stats;
      Edge unsolved = store.diff(layer, game.terminal);
      if (!unsolved.is_zero() && d + 1 < depth) {
        const Edge succ = image(store, game.ts, unsolved, PartitionStrategy{});
        if (!store.diff(succ, layers.layers[d + 1]).is_zero())
          throw unsolvable_layer(d, "a move leaves the next layer; "
                                    "the game must record its ply in the state");
        Edge left_over = Edge::zero();
        for (int p = 0; p < game.players; ++p) {
          Edge open = store.conj(unsolved, game.to_move[p]);
          for (std::size_t c : game.preference[p]) {
            const Edge pre = preimage(store, game.ts, sol.by_layer[d + 1][c], strategy, &stats);
            const Edge hit = store.conj(pre, open);
            cls[c] = store.disj(cls[c], hit);
            open = store.diff(open, hit);
          }
          left_over = store.disj(left_over, open);
        }
        // States no player can move in are left over as well.
        Edge movable = Edge::zero();
        for (Edge m : game.to_move)
          movable = store.disj(movable, m);
        unsolved = store.disj(left_over, store.diff(unsolved, movable));
      }
      if (!unsolved.is_zero())
        throw unsolvable_layer(
            d, satcount(store, unsolved, game.ts.state_domain()).str() +
                   " states without a successor in the next layer or a reward");
      sol.by_layer[d] = std::move(cls);
      sol.metrics.emplace_back(d, LayerMetrics{elapsed_ms(start), stats.total_nodes,
                                               stats.max_image_nodes,
                                               satcount(store, layer, game.ts.state_domain())});
    }
    sol.complete = true;
  } catch (const budget_exhausted &e) {
    sol.complete = false;
    sol.stop_reason = e.what();
  }
  return sol;
}

/// Reward vector of a reachable state (bits in game variable order).
inline std::vector<int> value_of(const NodeStore &store, const CompiledGame &game,
                                 const SolutionTable &sol, const LayerSequence &layers,
                                 const Assignment &state) {
  const std::vector<bool> values = game.ts.state_domain().to_store_values(store, state);
  for (std::size_t d = 0; d < layers.layers.size(); ++d) {
    if (!store.eval(layers.layers[d], values))
      continue;
    for (std::size_t c = 0; c < sol.by_layer[d].size(); ++c)
      if (store.eval(sol.by_layer[d][c], values))
        return sol.class_values[c];
    throw std::out_of_range("state in layer " + std::to_string(d) + " is not solved");
  }
  throw std::out_of_range("state is not reachable");
}

} // namespace lexbdd
