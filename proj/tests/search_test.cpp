#include <lexbdd/search.hpp>

#include <support/truth_table.hpp>

#include <gtest/gtest.h>

#include <set>

using namespace lexbdd;
using namespace lexbdd::testing;

namespace {

using Pairs = std::set<std::pair<std::uint64_t, std::uint64_t>>;

/// Random explicit system over n state bits with interleaved store variables.
struct RandomSystem {
  std::uint32_t n;
  NodeStore store;
  std::vector<Pairs> actions;
  std::unique_ptr<TransitionSystem> ts;

  RandomSystem(std::mt19937_64 &rng, std::uint32_t bits, int num_actions, double density)
      : n(bits), store(2 * bits) {
    const std::uint64_t states = std::uint64_t{1} << n;
    std::bernoulli_distribution edge(density);
    std::vector<Edge> relations;
    const Domain all = Domain::all(store);
    for (int a = 0; a < num_actions; ++a) {
      Pairs pairs;
      TruthTable t{2 * n, std::vector<bool>(std::size_t{1} << (2 * n))};
      for (std::uint64_t x = 0; x < states; ++x)
        for (std::uint64_t y = 0; y < states; ++y)
          if (edge(rng)) {
            pairs.emplace(x, y);
            t.bits[index_of(interleave(x, y))] = true;
          }
      actions.push_back(std::move(pairs));
      relations.push_back(build(store, all, t));
    }
    std::vector<var_t> cur, nxt;
    for (std::uint32_t i = 0; i < n; ++i) {
      cur.push_back(2 * i);
      nxt.push_back(2 * i + 1);
    }
    ts = std::make_unique<TransitionSystem>(store, cur, nxt, relations);
  }

  Assignment interleave(std::uint64_t x, std::uint64_t y) const {
    const Assignment ax = assignment_of(x, n), ay = assignment_of(y, n);
    Assignment a(2 * n);
    for (std::uint32_t i = 0; i < n; ++i) {
      a[2 * i] = ax[i];
      a[2 * i + 1] = ay[i];
    }
    return a;
  }

  Edge set_of(const std::set<std::uint64_t> &states) {
    TruthTable t{n, std::vector<bool>(std::size_t{1} << n)};
    for (std::uint64_t s : states)
      t.bits[s] = true;
    return build(store, ts->state_domain(), t);
  }

  std::set<std::uint64_t> states_of(Edge f) {
    const TruthTable t = table_of(store, ts->state_domain(), f);
    const auto ones = t.ones();
    return {ones.begin(), ones.end()};
  }

  std::set<std::uint64_t> post(const std::set<std::uint64_t> &s) const {
    std::set<std::uint64_t> out;
    for (const Pairs &a : actions)
      for (auto [x, y] : a)
        if (s.contains(x))
          out.insert(y);
    return out;
  }

  std::set<std::uint64_t> pre(const std::set<std::uint64_t> &s) const {
    std::set<std::uint64_t> out;
    for (const Pairs &a : actions)
      for (auto [x, y] : a)
        if (s.contains(y))
          out.insert(x);
    return out;
  }
};

std::set<std::uint64_t> random_states(std::mt19937_64 &rng, std::uint32_t n, double density) {
  std::set<std::uint64_t> out;
  std::bernoulli_distribution coin(density);
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s)
    if (coin(rng))
      out.insert(s);
  return out;
}

const PartitionStrategy kStrategies[] = {
    PartitionStrategy::none(), PartitionStrategy::fold_states_lex(8),
    PartitionStrategy::fold_states_lex(3), PartitionStrategy::states_lex(5),
    PartitionStrategy::disj_var()};

} // namespace

TEST(PartitionStrategy, ParseAndPrint) {
  for (const char *text : {"none", "fold-states-lex:8", "states-lex:32", "disj-var"})
    EXPECT_EQ(PartitionStrategy::parse(text).to_string(), text);
  EXPECT_EQ(PartitionStrategy::parse("fold-states-lex:4"), PartitionStrategy::fold_states_lex(4));
  for (const char *bad : {"", "fold", "fold-states-lex:", "fold-states-lex:0", "states-lex:x",
                          "states-lex:-3", "disj-var:2"})
    EXPECT_THROW(PartitionStrategy::parse(bad), std::invalid_argument) << bad;
}

TEST(PartitionSet, PiecesCoverWithoutOverlap) {
  std::mt19937_64 rng(77);
  for (int round = 0; round < 50; ++round) {
    NodeStore store(8);
    const Domain dom = Domain::all(store);
    const Edge s = build(store, dom, random_function(rng, 8));
    for (const PartitionStrategy &strategy : kStrategies) {
      const std::vector<Edge> parts = partition_set(store, dom, s, strategy);
      Edge cover = Edge::zero();
      for (std::size_t i = 0; i < parts.size(); ++i) {
        EXPECT_FALSE(parts[i].is_zero());
        for (std::size_t j = i + 1; j < parts.size(); ++j)
          EXPECT_TRUE(store.conj(parts[i], parts[j]).is_zero());
        cover = store.disj(cover, parts[i]);
      }
      EXPECT_EQ(cover, s) << strategy.to_string();
    }
  }
}

TEST(DisjoinBalanced, EqualsPlainDisjunction) {
  std::mt19937_64 rng(4);
  NodeStore store(7);
  const Domain dom = Domain::all(store);
  std::vector<Edge> fs;
  Edge plain = Edge::zero();
  for (int i = 0; i < 9; ++i) {
    fs.push_back(build(store, dom, random_function(rng, 7)));
    plain = store.disj(plain, fs.back());
  }
  EXPECT_EQ(disjoin_balanced(store, fs), plain);
  EXPECT_EQ(disjoin_balanced(store, {}), Edge::zero());
}

TEST(Image, MatchesExplicitSuccessorsForEveryStrategy) {
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 30; ++round) {
    const std::uint32_t n = std::uniform_int_distribution<std::uint32_t>(2, 5)(rng);
    RandomSystem sys(rng, n, 3, 0.15);
    const auto states = random_states(rng, n, 0.4);
    const Edge s = sys.set_of(states);
    for (const PartitionStrategy &strategy : kStrategies) {
      ImageStats stats;
      EXPECT_EQ(sys.states_of(image(sys.store, *sys.ts, s, strategy, &stats)), sys.post(states));
      EXPECT_EQ(sys.states_of(preimage(sys.store, *sys.ts, s, strategy)), sys.pre(states));
      EXPECT_LE(stats.max_image_nodes, stats.total_nodes);
    }
  }
}

TEST(Image, SubimageStatistics) {
  std::mt19937_64 rng(5);
  RandomSystem sys(rng, 4, 2, 0.2);
  const Edge s = sys.set_of(random_states(rng, 4, 0.8));
  ImageStats none, folds;
  image(sys.store, *sys.ts, s, PartitionStrategy::none(), &none);
  EXPECT_EQ(none.subimages, 2u);
  const std::size_t parts =
      partition_set(sys.store, sys.ts->state_domain(), s, PartitionStrategy::fold_states_lex(4))
          .size();
  image(sys.store, *sys.ts, s, PartitionStrategy::fold_states_lex(4), &folds);
  EXPECT_EQ(folds.subimages, 2 * parts);
}

TEST(LayeredBfs, MatchesExplicitBreadthFirstSearch) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 25; ++round) {
    const std::uint32_t n = std::uniform_int_distribution<std::uint32_t>(2, 5)(rng);
    RandomSystem sys(rng, n, 2, 0.06);
    const std::set<std::uint64_t> init{std::uniform_int_distribution<std::uint64_t>(
        0, (std::uint64_t{1} << n) - 1)(rng)};
    std::vector<std::set<std::uint64_t>> want{init};
    std::set<std::uint64_t> seen = init;
    for (;;) {
      std::set<std::uint64_t> next;
      for (std::uint64_t s : sys.post(want.back()))
        if (seen.insert(s).second)
          next.insert(s);
      if (next.empty())
        break;
      want.push_back(next);
    }
    for (const PartitionStrategy &strategy : kStrategies) {
      const LayerSequence seq = layered_bfs(sys.store, *sys.ts, sys.set_of(init), strategy);
      ASSERT_TRUE(seq.complete);
      ASSERT_EQ(seq.layers.size(), want.size());
      for (std::size_t d = 0; d < want.size(); ++d) {
        EXPECT_EQ(sys.states_of(seq.layers[d]), want[d]);
        EXPECT_EQ(seq.metrics[d].states, want[d].size());
      }
    }
  }
}

TEST(LayeredBfs, StopsWhenTheNodeBudgetRunsOut) {
  std::mt19937_64 rng(3);
  RandomSystem sys(rng, 5, 3, 0.1);
  const Edge init = sys.set_of({0});
  const std::size_t limit = sys.store.size() + 3;
  const LayerSequence seq = layered_bfs(sys.store, *sys.ts, init, {}, Budget{std::nullopt, limit});
  EXPECT_FALSE(seq.complete);
  EXPECT_FALSE(seq.stop_reason.empty());
  EXPECT_GE(seq.layers.size(), 1u);
  // The previous limit is restored afterwards.
  EXPECT_NO_THROW(layered_bfs(sys.store, *sys.ts, init));
}

TEST(LayeredBfs, StopsAtAnExpiredDeadline) {
  std::mt19937_64 rng(3);
  RandomSystem sys(rng, 5, 3, 0.1);
  const LayerSequence seq =
      layered_bfs(sys.store, *sys.ts, sys.set_of({0}), {},
                  Budget{std::chrono::steady_clock::now() - std::chrono::seconds(1), std::nullopt});
  EXPECT_FALSE(seq.complete);
  EXPECT_EQ(seq.layers.size(), 1u);
}

TEST(LayeredBfs, RejectsEmptyInitialSet) {
  std::mt19937_64 rng(3);
  RandomSystem sys(rng, 3, 1, 0.1);
  EXPECT_THROW(layered_bfs(sys.store, *sys.ts, Edge::zero()), contract_violation);
}
