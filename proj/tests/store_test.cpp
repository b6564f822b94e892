#include <lexbdd/dot.hpp>
#include <lexbdd/satcount.hpp>
#include <lexbdd/store.hpp>

#include <support/truth_table.hpp>

#include <gtest/gtest.h>

#include <set>
#include <sstream>

using namespace lexbdd;
using namespace lexbdd::testing;

namespace {

void expect_reduced_and_normalized(const NodeStore &store) {
  std::set<std::tuple<var_t, std::int32_t, std::int32_t>> triples;
  for (std::size_t slot = 2; slot <= store.size(); ++slot) {
    const Node &n = store.node(Edge(static_cast<std::int32_t>(slot)));
    EXPECT_NE(n.then_edge, n.else_edge) << "slot " << slot;
    EXPECT_FALSE(n.then_edge.complemented()) << "slot " << slot;
    EXPECT_LT(store.level_of(n.var), store.level(n.then_edge));
    EXPECT_LT(store.level_of(n.var), store.level(n.else_edge));
    EXPECT_TRUE(triples.emplace(n.var, n.then_edge.index(), n.else_edge.index()).second)
        << "duplicate triple at slot " << slot;
  }
}

} // namespace

TEST(Store, EliminationRule) {
  NodeStore store(3);
  EXPECT_EQ(store.mk_node(0, Edge::one(), Edge::one()), Edge::one());
  EXPECT_EQ(store.size(), 1u);
}

TEST(Store, UniqueTableReusesSlots) {
  NodeStore store(3);
  const Edge a = store.mk_node(1, Edge::one(), Edge::zero());
  const Edge b = store.mk_node(1, Edge::one(), Edge::zero());
  EXPECT_EQ(a, b);
  EXPECT_EQ(store.size(), 2u);
}

TEST(Store, ComplementSharesSlot) {
  NodeStore store(2);
  const Edge x = store.mk_node(0, Edge::one(), Edge::zero());
  const std::size_t before = store.size();
  const Edge not_x = store.mk_node(0, Edge::zero(), Edge::one());
  EXPECT_EQ(not_x, !x);
  EXPECT_EQ(not_x.slot(), x.slot());
  EXPECT_EQ(store.size(), before);
}

TEST(Store, NegationIsConstantTime) {
  NodeStore store(4);
  EXPECT_EQ(NodeStore::negate(Edge::zero()), Edge::one());
  const Edge f = store.disj(store.var(0), store.conj(store.var(1), store.var(3)));
  const std::size_t before = store.size();
  EXPECT_EQ(!!f, f);
  EXPECT_EQ(NodeStore::negate(NodeStore::negate(f)), f);
  (void)NodeStore::negate(f);
  EXPECT_EQ(store.size(), before);
}

TEST(Store, OrderingViolationIsRejected) {
  NodeStore store(3);
  const Edge x0 = store.var(0);
  EXPECT_THROW(store.mk_node(1, x0, Edge::zero()), contract_violation);
  EXPECT_THROW(store.mk_node(0, x0, Edge::zero()), contract_violation);
  EXPECT_THROW(store.mk_node(7, Edge::one(), Edge::zero()), contract_violation);
}

TEST(Store, ApplyIdentities) {
  std::mt19937_64 rng(7);
  NodeStore store(6);
  const Domain dom = Domain::all(store);
  for (int round = 0; round < 20; ++round) {
    const Edge f = build(store, dom, random_function(rng, 6));
    EXPECT_EQ(store.conj(f, !f), Edge::zero());
    EXPECT_EQ(store.disj(f, Edge::zero()), f);
    EXPECT_EQ(store.disj(f, !f), Edge::one());
    EXPECT_EQ(store.exor(f, f), Edge::zero());
    EXPECT_EQ(store.exor(f, !f), Edge::one());
  }
}

TEST(Store, ApplyMatchesTruthTables) {
  std::mt19937_64 rng(11);
  NodeStore store(8);
  const Domain dom = Domain::all(store);
  for (int round = 0; round < 40; ++round) {
    const TruthTable a = random_function(rng, 8);
    const TruthTable b = random_function(rng, 8);
    const Edge fa = build(store, dom, a);
    const Edge fb = build(store, dom, b);
    TruthTable and_t = a, or_t = a, xor_t = a;
    for (std::uint64_t i = 0; i < a.size(); ++i) {
      and_t.bits[i] = a[i] && b[i];
      or_t.bits[i] = a[i] || b[i];
      xor_t.bits[i] = a[i] != b[i];
    }
    EXPECT_EQ(store.conj(fa, fb), build(store, dom, and_t));
    EXPECT_EQ(store.disj(fa, fb), build(store, dom, or_t));
    EXPECT_EQ(store.exor(fa, fb), build(store, dom, xor_t));
  }
  expect_reduced_and_normalized(store);
}

TEST(Store, XorOfTwoVariablesHasTwoModels) {
  NodeStore store(2);
  const Edge f = store.exor(store.var(0), store.var(1));
  int models = 0;
  for (bool a : {false, true})
    for (bool b : {false, true})
      models += store.eval(f, std::vector<bool>{a, b}) ? 1 : 0;
  EXPECT_EQ(models, 2);
  EXPECT_EQ(satcount(store, f, Domain::all(store)), 2);
}

TEST(Store, ExistsExamples) {
  NodeStore store(3);
  const Edge x0 = store.var(0), x1 = store.var(1), x2 = store.var(2);
  const Edge g = store.disj(x1, x2);
  const var_t q0[] = {0};
  EXPECT_EQ(store.exists(q0, store.conj(x0, g)), g);
  const var_t all[] = {0, 1, 2};
  EXPECT_EQ(store.exists(all, store.conj(x0, !x2)), Edge::one());
  EXPECT_EQ(store.exists(all, Edge::zero()), Edge::zero());
  const var_t q2[] = {2};
  EXPECT_EQ(store.exists(q2, store.exor(x1, x2)), Edge::one());
}

TEST(Store, ExistsMatchesCofactorDisjunction) {
  std::mt19937_64 rng(5);
  NodeStore store(7);
  const Domain dom = Domain::all(store);
  for (int round = 0; round < 30; ++round) {
    const TruthTable t = random_function(rng, 7);
    const std::uint32_t p = std::uniform_int_distribution<std::uint32_t>(0, 6)(rng);
    TruthTable q = t;
    const std::uint64_t bit = std::uint64_t{1} << (6 - p);
    for (std::uint64_t i = 0; i < t.size(); ++i)
      q.bits[i] = t[i | bit] || t[i & ~bit];
    const var_t v[] = {dom.var(p)};
    EXPECT_EQ(store.exists(v, build(store, dom, t)), build(store, dom, q));
  }
}

TEST(Store, AndExistsEqualsTwoStepProduct) {
  std::mt19937_64 rng(42);
  NodeStore store(10);
  const Domain dom = Domain::all(store);
  for (int round = 0; round < 50; ++round) {
    const Edge f = build(store, dom, random_function(rng, 10));
    const Edge g = build(store, dom, random_function(rng, 10));
    std::vector<var_t> vars;
    for (var_t v = 0; v < 10; ++v)
      if (std::bernoulli_distribution(0.4)(rng))
        vars.push_back(v);
    EXPECT_EQ(store.and_exists(vars, f, g), store.exists(vars, store.conj(f, g)));
  }
}

TEST(Store, AndExistsEdgeCases) {
  std::mt19937_64 rng(3);
  NodeStore store(5);
  const Domain dom = Domain::all(store);
  const Edge f = build(store, dom, random_function(rng, 5));
  const Edge g = build(store, dom, random_function(rng, 5));
  const var_t all[] = {0, 1, 2, 3, 4};
  EXPECT_EQ(store.and_exists(all, f, Edge::zero()), Edge::zero());
  EXPECT_EQ(store.and_exists(std::span<const var_t>{}, f, g), store.conj(f, g));
}

TEST(Store, RenameIdentityInverseAndSingleVariable) {
  // Interleaved order x0 x0' x1 x1' x2 x2'.
  NodeStore store(6);
  std::mt19937_64 rng(9);
  const Domain cur(store, {0, 2, 4});
  const Edge f = build(store, cur, random_function(rng, 3));
  EXPECT_EQ(store.rename(f, {}), f);
  const std::pair<var_t, var_t> fwd[] = {{0, 1}, {2, 3}, {4, 5}};
  const std::pair<var_t, var_t> back[] = {{1, 0}, {3, 2}, {5, 4}};
  const Edge primed = store.rename(f, fwd);
  EXPECT_EQ(store.rename(primed, back), f);
  EXPECT_EQ(store.rename(!f, fwd), !primed);
  const std::pair<var_t, var_t> single[] = {{0, 1}};
  EXPECT_EQ(store.rename(store.var(0), single), store.var(1));
}

TEST(Store, RenameRejectsOrderBreakingMaps) {
  NodeStore store(3);
  const Edge f = store.conj(store.var(0), store.var(1));
  const std::pair<var_t, var_t> swap[] = {{0, 2}, {2, 0}};
  EXPECT_THROW(store.rename(f, swap), contract_violation);
  const std::pair<var_t, var_t> clash[] = {{0, 2}, {1, 2}};
  EXPECT_THROW(store.rename(f, clash), contract_violation);
}

TEST(Store, CanonicityExhaustiveUpToFourVariables) {
  for (std::uint32_t n = 1; n <= 4; ++n) {
    NodeStore store(n);
    const Domain dom = Domain::all(store);
    const std::uint64_t functions = std::uint64_t{1} << (1U << n);
    std::set<std::int32_t> refs;
    for (std::uint64_t code = 0; code < functions; ++code) {
      TruthTable t{n, std::vector<bool>(std::size_t{1} << n)};
      for (std::uint64_t i = 0; i < t.size(); ++i)
        t.bits[i] = (code >> i) & 1U;
      const Edge f = build(store, dom, t);
      EXPECT_TRUE(refs.insert(f.index()).second) << "n=" << n << " code=" << code;
      EXPECT_EQ(build(store, dom, t), f);
    }
    EXPECT_EQ(refs.size(), functions);
    expect_reduced_and_normalized(store);
  }
}

TEST(Store, EvalMatchesTruthTable) {
  std::mt19937_64 rng(1234);
  for (std::uint32_t n = 1; n <= 12; ++n) {
    NodeStore store(n);
    const Domain dom = Domain::all(store);
    for (int round = 0; round < 4; ++round) {
      const TruthTable t = random_function(rng, n);
      const Edge f = build(store, dom, t);
      EXPECT_EQ(table_of(store, dom, f), t);
      EXPECT_EQ(table_of(store, dom, !f).count(), t.size() - t.count());
    }
  }
}

TEST(Store, NonIdentityVariableOrder) {
  NodeStore store(std::vector<var_t>{2, 0, 1});
  EXPECT_EQ(store.level_of(2), 0u);
  const Edge f = store.conj(store.var(0), !store.var(2));
  EXPECT_EQ(store.var_of(f), 2u);
  EXPECT_TRUE(store.eval(f, std::vector<bool>{true, false, false}));
  EXPECT_FALSE(store.eval(f, std::vector<bool>{true, false, true}));
  EXPECT_THROW(NodeStore(std::vector<var_t>{0, 0, 1}), contract_violation);
}

TEST(Store, NodeBudgetThrows) {
  NodeStore store(8);
  store.set_node_limit(4);
  EXPECT_THROW(
      {
        Edge f = Edge::one();
        for (var_t v = 0; v < 8; ++v)
          f = store.exor(f, store.var(v));
      },
      budget_exhausted);
}

TEST(Store, DagSizeAndSupport) {
  NodeStore store(4);
  const Edge f = store.exor(store.var(1), store.var(3));
  EXPECT_EQ(store.dag_size(f), 3u); // x1, x3 and the sink
  EXPECT_EQ(store.support(f), (std::vector<var_t>{1, 3}));
  EXPECT_EQ(store.dag_size(Edge::zero()), 1u);
}

TEST(Store, DotExportMarksEdges) {
  NodeStore store(2);
  const Edge f = store.exor(store.var(0), store.var(1));
  const Edge roots[] = {f};
  std::ostringstream os;
  write_dot(os, store, roots);
  const std::string dot = os.str();
  EXPECT_NE(dot.find("digraph"), std::string::npos);
  EXPECT_NE(dot.find("style=dashed"), std::string::npos);
  EXPECT_NE(dot.find("arrowhead=dot"), std::string::npos);
}
