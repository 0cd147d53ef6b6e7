#include <gtest/gtest.h>

#include <random>

#include "pdlkit/enumerate.hpp"
#include "pdlkit/parser.hpp"
#include "pdlkit/random_formula.hpp"
#include "pdlkit/semantics.hpp"

using namespace pdlkit;

namespace {

using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;

Program a(std::uint32_t i) { return Program::atomic(i); }

StateSet states(std::size_t n, std::initializer_list<std::size_t> xs) {
  StateSet s(n);
  for (auto x : xs) s.set(x);
  return s;
}

// Brute-force reference for a relation from its defining clause.
Relation random_relation(std::size_t n, double p, std::mt19937_64& rng) {
  Relation r(n);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t)
      if (unit_draw(rng) < p) r.insert(s, t);
  return r;
}

}  // namespace

TEST(Relation, StarOfSingleEdge) {
  KripkeModel m(2);
  m.add_edge(1, 0, 1);
  EXPECT_EQ(relation_of(m, Program::star(a(1)), Dialect::PDL).pairs(), (Pairs{{0, 0}, {0, 1}, {1, 1}}));
}

TEST(Relation, Intersection) {
  KripkeModel m(2);
  m.add_edge(1, 0, 1);
  m.add_edge(2, 0, 1);
  m.add_edge(2, 0, 0);
  EXPECT_EQ(relation_of(m, Program::inter(a(1), a(2)), Dialect::IPDL).pairs(), (Pairs{{0, 1}}));
}

TEST(Relation, ParallelOverStar) {
  KripkeModel m(2);
  m.enable_star();
  m.add_star(0, 0, 1);
  m.add_edge(1, 0, 0);
  EXPECT_EQ(relation_of(m, Program::par(a(1), a(1)), Dialect::PRSPDL).pairs(), (Pairs{{1, 1}}));
}

TEST(Relation, ParallelMatchesQuadrupleEnumeration) {
  std::mt19937_64 rng(4);
  for (int round = 0; round < 60; ++round) {
    const std::size_t n = 1 + rng() % 4;
    KripkeModel m = random_model(n, {1, 2}, {}, 0.35, rng(), true);
    Relation got = relation_of(m, Program::par(a(1), a(2)), Dialect::PRSPDL);
    const Relation& r1 = m.relation(1);
    const Relation& r2 = m.relation(2);
    Relation want(n);
    for (std::size_t x1 = 0; x1 < n; ++x1)
      for (std::size_t y1 = 0; y1 < n; ++y1)
        for (std::size_t x2 = 0; x2 < n; ++x2)
          for (std::size_t y2 = 0; y2 < n; ++y2) {
            if (!r1.contains(x1, y1) || !r2.contains(x2, y2)) continue;
            const StateSet from = m.composition(x1, x2);
            const StateSet to = m.composition(y1, y2);
            for (std::size_t s = 0; s < n; ++s)
              for (std::size_t t = 0; t < n; ++t)
                if (from.test(s) && to.test(t)) want.insert(s, t);
          }
    EXPECT_EQ(got, want);
  }
}

TEST(Relation, SpecialPrograms) {
  // 2 * 1 = {0}: 0 r1 2, 0 r2 1, 2 s1 0, 1 s2 0.
  KripkeModel m(3);
  m.enable_star();
  m.add_star(2, 1, 0);
  EXPECT_EQ(relation_of(m, Program::special(SpecialProgram::R1), Dialect::PRSPDL).pairs(), (Pairs{{0, 2}}));
  EXPECT_EQ(relation_of(m, Program::special(SpecialProgram::R2), Dialect::PRSPDL).pairs(), (Pairs{{0, 1}}));
  EXPECT_EQ(relation_of(m, Program::special(SpecialProgram::S1), Dialect::PRSPDL).pairs(), (Pairs{{2, 0}}));
  EXPECT_EQ(relation_of(m, Program::special(SpecialProgram::S2), Dialect::PRSPDL).pairs(), (Pairs{{1, 0}}));
}

TEST(Relation, TestIsIdentityOnTruthSet) {
  KripkeModel m(3);
  m.set_valuation(1, states(3, {0, 2}));
  EXPECT_EQ(relation_of(m, Program::test(Formula::var(1)), Dialect::IPDL).pairs(), (Pairs{{0, 0}, {2, 2}}));
}

TEST(Relation, PrspdlConstructNeedsStar) {
  KripkeModel m(2);
  EXPECT_THROW(relation_of(m, Program::special(SpecialProgram::R1), Dialect::PRSPDL), ModelError);
  EXPECT_THROW(check(m, 0, parse("[a1 || a1]false", Dialect::PRSPDL), Dialect::PRSPDL), ModelError);
}

TEST(Relation, DialectChecked) {
  KripkeModel m(1);
  EXPECT_THROW(relation_of(m, Program::inter(a(1), a(1)), Dialect::PDL), DialectError);
}

TEST(Relation, ClosuresAgreeOnRandomRelations) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 1 + rng() % 8;
    Relation r = random_relation(n, 0.1 + 0.3 * unit_draw(rng), rng);
    EXPECT_EQ(r.reflexive_transitive_closure(), r.reflexive_transitive_closure_worklist());
  }
}

TEST(Relation, ChoiceAndInterAreSetOperations) {
  std::mt19937_64 rng(13);
  FormulaGenerator gp({Dialect::IPDL, 2, 2, 10}, 31);
  for (int i = 0; i < 100; ++i) {
    KripkeModel m = random_model(1 + rng() % 4, {1, 2}, {1, 2}, 0.4, rng());
    Formula f1 = gp.next();
    Formula f2 = gp.next();
    Program x = Program::seq(a(1), Program::test(f1));
    Program y = Program::star(Program::seq(Program::test(f2), a(2)));
    EXPECT_EQ(relation_of(m, Program::choice(x, y), Dialect::IPDL),
              relation_of(m, x, Dialect::IPDL) | relation_of(m, y, Dialect::IPDL));
    EXPECT_EQ(relation_of(m, Program::inter(x, y), Dialect::IPDL),
              relation_of(m, x, Dialect::IPDL) & relation_of(m, y, Dialect::IPDL));
  }
}

TEST(Check, Examples) {
  KripkeModel one(1);
  EXPECT_FALSE(check(one, 0, Formula::falsum(), Dialect::PDL));
  EXPECT_TRUE(check(one, 0, parse("[a1]false", Dialect::PDL), Dialect::PDL));

  KripkeModel two(2);
  two.add_edge(1, 0, 1);
  two.set_valuation(1, states(2, {1}));
  EXPECT_TRUE(check(two, 0, parse("<a1>p1", Dialect::PDL), Dialect::PDL));
  EXPECT_FALSE(check(two, 1, parse("<a1>p1", Dialect::PDL), Dialect::PDL));
  EXPECT_THROW(check(two, 2, Formula::falsum(), Dialect::PDL), ModelError);
}

TEST(TruthSet, Examples) {
  KripkeModel m(3);
  m.set_valuation(1, states(3, {0, 2}));
  EXPECT_TRUE(truth_set(m, Formula::falsum(), Dialect::PDL).none());
  EXPECT_TRUE(truth_set(m, top(), Dialect::PDL).all());
  EXPECT_EQ(truth_set(m, Formula::var(1), Dialect::PDL), states(3, {0, 2}));
}

// Box and diamond agree with quantifying over the materialized relation.
TEST(Check, ModalitiesMatchRelationClause) {
  std::mt19937_64 rng(5);
  for (Dialect d : {Dialect::PDL, Dialect::IPDL, Dialect::PRSPDL}) {
    FormulaGenerator gen({d, 2, 2, 24}, 50 + static_cast<int>(d));
    for (int i = 0; i < 200; ++i) {
      Formula f = gen.next();
      if (f.kind() != Formula::Kind::Box) continue;
      KripkeModel m = random_model(1 + rng() % 5, {1, 2}, {1, 2}, 0.35, rng(), d == Dialect::PRSPDL);
      Relation r = relation_of(m, f.program(), d);
      StateSet body = truth_set(m, f.body(), d);
      StateSet boxed = truth_set(m, f, d);
      StateSet dia = truth_set(m, diamond(f.program(), f.body()), d);
      for (std::size_t s = 0; s < m.num_states(); ++s) {
        bool all = true, some = false;
        for (std::size_t t = 0; t < m.num_states(); ++t) {
          if (!r.contains(s, t)) continue;
          all = all && body.test(t);
          some = some || body.test(t);
        }
        EXPECT_EQ(boxed.test(s), all) << print(f);
        EXPECT_EQ(dia.test(s), some) << print(f);
      }
    }
  }
}

TEST(Check, SubstitutionValuationLemma) {
  std::mt19937_64 rng(6);
  int done = 0;
  for (Dialect d : {Dialect::PDL, Dialect::IPDL, Dialect::PRSPDL}) {
    FormulaGenerator gen({d, 3, 2, 20}, 60 + static_cast<int>(d));
    FormulaGenerator rep({d, 3, 2, 10}, 70 + static_cast<int>(d));
    for (int i = 0; i < 200; ++i, ++done) {
      Formula psi = gen.next();
      Formula chi = rep.next();
      const std::uint32_t v = 1 + static_cast<std::uint32_t>(rng() % 3);
      KripkeModel m = random_model(1 + rng() % 4, {1, 2}, {1, 2, 3}, 0.4, rng(), d == Dialect::PRSPDL);
      KripkeModel m2 = m;
      m2.set_valuation(v, truth_set(m, chi, d));
      EXPECT_EQ(truth_set(m, substitute(psi, v, chi), d), truth_set(m2, psi, d)) << print(psi);
    }
  }
  EXPECT_GE(done, 500);
}

TEST(Enumerate, Counts) {
  EXPECT_EQ(enumerate_models(1, {1}, {}, Dialect::PDL).size(), 2u);
  EXPECT_EQ(enumerate_models(1, {}, {1}, Dialect::PDL).size(), 2u);
  EXPECT_EQ(enumerate_models(2, {1}, {}, Dialect::PDL).size(), 16u);
}

TEST(Enumerate, AllDistinctAndDeterministic) {
  auto ms = enumerate_models(2, {1}, {1}, Dialect::PDL);
  ASSERT_EQ(ms.size(), 64u);
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = i + 1; j < ms.size(); ++j) EXPECT_FALSE(ms[i] == ms[j]);
  auto again = enumerate_models(2, {1}, {1}, Dialect::PDL);
  for (std::size_t i = 0; i < ms.size(); ++i) EXPECT_TRUE(ms[i] == again[i]);
}

TEST(Enumerate, StarSupport) {
  EnumerationOptions o;
  o.star_support = std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}};
  // one support pair with 2 possible result states
  EXPECT_EQ(enumerate_models(2, {}, {}, Dialect::PRSPDL, o).size(), 4u);
  for (const auto& m : enumerate_models(2, {}, {}, Dialect::PRSPDL, o)) EXPECT_TRUE(m.has_star());
}

TEST(Enumerate, CapIsReported) {
  EnumerationOptions o;
  o.cap = 10;
  EXPECT_THROW(enumerate_models(2, {1}, {}, Dialect::PDL, o), ResourceLimitError);
  ModelEnumerator e(2, {1}, {}, Dialect::PDL, o);
  int k = 0;
  while (e.next()) ++k;
  EXPECT_EQ(k, 10);
  EXPECT_TRUE(e.truncated());
  EXPECT_THROW(ModelEnumerator(0, {}, {}, Dialect::PDL), PreconditionError);
}

TEST(RandomModel, Extremes) {
  KripkeModel empty = random_model(3, {1}, {1}, 0.0, 1);
  EXPECT_TRUE(empty.relation(1).empty());
  EXPECT_TRUE(empty.valuation(1).none());
  KripkeModel full = random_model(3, {1}, {1}, 1.0, 1);
  EXPECT_EQ(full.relation(1).num_pairs(), 9u);
  EXPECT_TRUE(full.valuation(1).all());
  EXPECT_THROW(random_model(3, {1}, {1}, 1.5, 1), PreconditionError);
}

TEST(RandomModel, SeedDetermined) {
  EXPECT_TRUE(random_model(5, {1, 2}, {1}, 0.3, 77, true) == random_model(5, {1, 2}, {1}, 0.3, 77, true));
  EXPECT_FALSE(random_model(5, {1, 2}, {1}, 0.3, 77) == random_model(5, {1, 2}, {1}, 0.3, 78));
}

TEST(Model, RejectsBadStates) {
  EXPECT_THROW(KripkeModel(0), ModelError);
  KripkeModel m(2);
  EXPECT_THROW(m.add_edge(1, 0, 2), ModelError);
}
