#pragma once

#include <lexbdd/dot.hpp>
#include <lexbdd/game.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace lexbdd {

/// One explore-and-solve run.
struct RunConfig {
  std::filesystem::path game;
  PartitionStrategy strategy;
  double time_budget_s = 60;
  std::size_t node_budget = 10'000'000;
  /// Reserved; no step of the run is randomized.
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> csv;
  std::optional<std::filesystem::path> dot_dir;

  void validate() const {
    if (!(time_budget_s > 0) || !std::isfinite(time_budget_s))
      throw std::invalid_argument("time budget must be a positive number of seconds");
    if (node_budget == 0)
      throw std::invalid_argument("node budget must be positive");
    if (strategy.kind != PartitionStrategy::Kind::None &&
        strategy.kind != PartitionStrategy::Kind::DisjVar && strategy.param == 0)
      throw std::invalid_argument("partition parameter must be at least 1");
  }
};

struct ReportRow {
  std::string game;
  std::string strategy;
  std::string direction; ///< "forward" or "backward"
  std::size_t layer = 0;
  double time_ms = 0;
  std::size_t total_nodes = 0;
  std::size_t max_image_nodes = 0;
  count_t layer_states;

  friend bool operator==(const ReportRow &, const ReportRow &) = default;
};

struct RunReport {
  std::string game;
  std::string strategy;
  std::vector<ReportRow> rows;
  /// Not recorded in CSV; false for reports read back from a file.
  bool solved = false;
  bool budget_exhausted = false;
  std::string stop_reason;
  std::size_t forward_layers = 0;
  std::size_t backward_layers = 0;
  /// Value of the initial state when solved.
  std::vector<int> initial_value;

  /// Groups rows of a single run; all rows must name the same game and strategy.
  static RunReport from_rows(std::vector<ReportRow> rows) {
    RunReport r;
    if (rows.empty())
      throw std::invalid_argument("report has no rows");
    r.game = rows.front().game;
    r.strategy = rows.front().strategy;
    for (const ReportRow &row : rows) {
      if (row.game != r.game || row.strategy != r.strategy)
        throw std::invalid_argument("rows of several runs in one report");
      (row.direction == "forward" ? r.forward_layers : r.backward_layers)++;
    }
    r.rows = std::move(rows);
    return r;
  }
};

inline constexpr std::string_view csv_header =
    "game,strategy,direction,layer,time_ms,total_nodes,max_image_nodes,layer_states";

inline void write_csv(std::ostream &out, const std::vector<ReportRow> &rows) {
  out << csv_header << '\n';
  for (const ReportRow &r : rows) {
    char time[64];
    const auto res = std::to_chars(time, time + sizeof time, r.time_ms);
    out << r.game << ',' << r.strategy << ',' << r.direction << ',' << r.layer << ','
        << std::string_view(time, static_cast<std::size_t>(res.ptr - time)) << ','
        << r.total_nodes << ',' << r.max_image_nodes << ',' << r.layer_states << '\n';
  }
}

inline void write_csv(const std::filesystem::path &path, const std::vector<ReportRow> &rows) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  write_csv(out, rows);
}

namespace detail {

template <class T> T parse_field(std::string_view s, std::size_t line, const char *what) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw std::runtime_error("csv line " + std::to_string(line) + ": bad " + what + " '" +
                             std::string(s) + "'");
  return v;
}

} // namespace detail

inline std::vector<ReportRow> read_csv(std::istream &in) {
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != csv_header)
    throw std::runtime_error("csv header must be '" + std::string(csv_header) + "'");
  std::vector<ReportRow> rows;
  for (std::size_t no = 2; std::getline(in, line); ++no) {
    if (detail::trim(line).empty())
      continue;
    const std::string_view text = detail::trim(line);
    const auto f = detail::split_on(text, ',');
    if (f.size() != 8)
      throw std::runtime_error("csv line " + std::to_string(no) + ": expected 8 fields");
    ReportRow r;
    r.game = std::string(f[0]);
    r.strategy = std::string(f[1]);
    r.direction = std::string(f[2]);
    if (r.direction != "forward" && r.direction != "backward")
      throw std::runtime_error("csv line " + std::to_string(no) + ": bad direction");
    r.layer = detail::parse_field<std::size_t>(f[3], no, "layer");
    r.time_ms = detail::parse_field<double>(f[4], no, "time_ms");
    r.total_nodes = detail::parse_field<std::size_t>(f[5], no, "total_nodes");
    r.max_image_nodes = detail::parse_field<std::size_t>(f[6], no, "max_image_nodes");
    if (f[7].empty() || !std::all_of(f[7].begin(), f[7].end(),
                                     [](char c) { return c >= '0' && c <= '9'; }))
      throw std::runtime_error("csv line " + std::to_string(no) + ": bad layer_states");
    r.layer_states = count_t(std::string(f[7]));
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::vector<ReportRow> read_csv(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path.string());
  return read_csv(in);
}

namespace detail {

inline void write_layer_dots(const NodeStore &store, const GameSpec &spec,
                             const LayerSequence &layers, const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir);
  const auto name = [&](var_t v) {
    return spec.vars[v / 2] + (v % 2 ? "'" : "");
  };
  for (std::size_t d = 0; d < layers.layers.size(); ++d) {
    const auto path = dir / (spec.name + "_layer" + std::to_string(d) + ".dot");
    std::ofstream out(path);
    if (!out)
      throw std::runtime_error("cannot write " + path.string());
    const Edge root = layers.layers[d];
    write_dot(out, store, std::span<const Edge>(&root, 1), name);
  }
}

} // namespace detail

/// Forward layered search, then retrograde solving, under one shared budget.
inline RunReport run(const GameSpec &spec, const RunConfig &config) {
  config.validate();
  NodeStore store = make_game_store(spec);
  const CompiledGame game = compile(store, spec);
  const Budget budget =
      Budget::from(std::chrono::duration<double>(config.time_budget_s), config.node_budget);

  RunReport report;
  report.game = spec.name;
  report.strategy = config.strategy.to_string();
  const auto add_row = [&](const char *direction, std::size_t layer, const LayerMetrics &m) {
    report.rows.push_back({report.game, report.strategy, direction, layer, m.time_ms,
                           m.total_nodes, m.max_image_nodes, m.states});
  };

  const LayerSequence layers = layered_bfs(store, game.ts, game.init, config.strategy, budget);
  for (std::size_t d = 0; d < layers.layers.size(); ++d)
    add_row("forward", d, layers.metrics[d]);
  report.forward_layers = layers.layers.size();
  if (config.dot_dir)
    detail::write_layer_dots(store, spec, layers, *config.dot_dir);

  if (!layers.complete) {
    report.budget_exhausted = true;
    report.stop_reason = layers.stop_reason;
  } else {
    const SolutionTable sol = solve(store, game, layers, config.strategy, budget);
    for (const auto &[d, m] : sol.metrics)
      add_row("backward", d, m);
    report.backward_layers = sol.metrics.size();
    if (sol.complete) {
      report.solved = true;
      report.initial_value = value_of(store, game, sol, layers, spec.init);
    } else {
      report.budget_exhausted = true;
      report.stop_reason = sol.stop_reason;
    }
  }
  if (config.csv)
    write_csv(*config.csv, report.rows);
  return report;
}

inline RunReport run(const RunConfig &config) { return run(load_game(config.game), config); }

/// Ratios of one run against a baseline run of the same game.
struct Comparison {
  std::string game;
  std::string strategy;
  /// Rows completed (both directions) relative to the baseline.
  double layers = 1;
  /// Summed layer time over the layers both runs completed.
  double time = 1;
  /// Largest single sub-image over the layers both runs completed.
  double max_nodes = 1;
};

namespace detail {

inline double ratio(double num, double den) {
  if (den == 0)
    return num == 0 ? 1.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

} // namespace detail

inline std::vector<Comparison> compare(const std::vector<RunReport> &reports,
                                       const RunReport &baseline) {
  using Key = std::pair<std::string, std::size_t>;
  std::map<Key, const ReportRow *> base;
  for (const ReportRow &r : baseline.rows)
    base[{r.direction, r.layer}] = &r;

  std::vector<Comparison> out;
  for (const RunReport &rep : reports) {
    if (rep.game != baseline.game)
      throw std::invalid_argument("cannot compare game '" + rep.game + "' with baseline game '" +
                                  baseline.game + "'");
    double time = 0, base_time = 0;
    std::size_t nodes = 0, base_nodes = 0;
    for (const ReportRow &r : rep.rows) {
      const auto it = base.find({r.direction, r.layer});
      if (it == base.end())
        continue;
      time += r.time_ms;
      base_time += it->second->time_ms;
      nodes = std::max(nodes, r.max_image_nodes);
      base_nodes = std::max(base_nodes, it->second->max_image_nodes);
    }
    out.push_back({rep.game, rep.strategy,
                   detail::ratio(double(rep.rows.size()), double(baseline.rows.size())),
                   detail::ratio(time, base_time),
                   detail::ratio(double(nodes), double(base_nodes))});
  }
  return out;
}

inline void print_comparison(std::ostream &out, const std::vector<Comparison> &rows) {
  out << std::left << std::setw(14) << "game" << std::setw(22) << "strategy" << std::right
      << std::setw(8) << "layers" << std::setw(8) << "time" << std::setw(11) << "max-nodes"
      << '\n';
  out << std::fixed << std::setprecision(2);
  for (const Comparison &c : rows)
    out << std::left << std::setw(14) << c.game << std::setw(22) << c.strategy << std::right
        << std::setw(8) << c.layers << std::setw(8) << c.time << std::setw(11) << c.max_nodes
        << '\n';
  out << std::defaultfloat;
}

} // namespace lexbdd
