// lexbdd: explore and solve a game file, or compare per-layer CSV reports.

#include <lexbdd/report.hpp>

#include <CLI11.hpp>

#include <iostream>

namespace {

int run_solve(const lexbdd::RunConfig &config) {
  const lexbdd::RunReport report = lexbdd::run(config);
  lexbdd::count_t states = 0;
  for (const lexbdd::ReportRow &r : report.rows)
    if (r.direction == "forward")
      states += r.layer_states;
  std::cout << "game        " << report.game << '\n'
            << "strategy    " << report.strategy << '\n'
            << "layers      " << report.forward_layers << " forward, " << report.backward_layers
            << " backward\n"
            << "states      " << states << '\n';
  if (!report.solved) {
    std::cout << "status      budget exhausted (" << report.stop_reason << ")\n";
    return 2;
  }
  std::cout << "status      solved\nvalue       ";
  for (std::size_t p = 0; p < report.initial_value.size(); ++p)
    std::cout << (p ? " / " : "") << report.initial_value[p];
  std::cout << '\n';
  return 0;
}

int run_compare(const std::vector<std::string> &files, const std::string &baseline_file) {
  const lexbdd::RunReport baseline = lexbdd::RunReport::from_rows(lexbdd::read_csv(baseline_file));
  std::vector<lexbdd::RunReport> reports;
  for (const std::string &f : files)
    reports.push_back(lexbdd::RunReport::from_rows(lexbdd::read_csv(f)));
  lexbdd::print_comparison(std::cout, lexbdd::compare(reports, baseline));
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Symbolic game exploration with lexicographic BDD partitioning"};
  app.require_subcommand(1);

  lexbdd::RunConfig config;
  std::string partition = "none";
  auto *solve = app.add_subcommand("solve", "Explore a game breadth-first and solve it");
  solve->add_option("game", config.game, "Game description file")->required();
  solve->add_option("--partition", partition,
                    "none | fold-states-lex:K | states-lex:BOUND | disj-var")
      ->capture_default_str();
  solve->add_option("--time-budget", config.time_budget_s, "Seconds for the whole run")
      ->capture_default_str();
  solve->add_option("--node-budget", config.node_budget, "Maximum BDD nodes in the store")
      ->capture_default_str();
  solve->add_option("--seed", config.seed, "Reserved");
  solve->add_option("--csv", config.csv, "Write per-layer metrics to this file");
  solve->add_option("--dot-dir", config.dot_dir, "Write one DOT file per forward layer here");

  std::vector<std::string> files;
  std::string baseline;
  auto *compare = app.add_subcommand("compare", "Ratios of CSV reports against a baseline");
  compare->add_option("csv", files, "Reports to compare")->required();
  compare->add_option("--baseline", baseline, "Baseline report")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*solve) {
      config.strategy = lexbdd::PartitionStrategy::parse(partition);
      return run_solve(config);
    }
    return run_compare(files, baseline);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
