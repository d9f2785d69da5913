#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "erkit/rewrite.hpp"
#include "erkit/textio.hpp"
#include "helpers.hpp"

using namespace erkit;
using namespace erkit::testing;

namespace {

Atom e(Term s, Term t) { return Atom{Predicate{"E", 2}, {std::move(s), std::move(t)}}; }

bool has_disjunct_isomorphic_to(const UCQ& ucq, const CQ& q) {
  for (const auto& d : ucq.disjuncts())
    if (isomorphic(d, q)) return true;
  return false;
}

}  // namespace

TEST_CASE("a frontier unification rewrites the loop through the pair rule") {
  RuleSet pair = corpus_rules("pair.rules");
  CQ loop = corpus_query("loop.cq");

  // the extension rule is blocked: its existential would capture a frontier var
  CHECK(rewrite_step(loop, pair.by_id("r1")).empty());

  // the pair rule head E(x,yp) unifies both positions with the loop variable
  auto results = rewrite_step(loop, pair.by_id("r2"));
  REQUIRE(results.size() == 1);
  CHECK(isomorphic(results[0],
                   CQ{{e(variable("m"), variable("p")), e(variable("q"), variable("m"))}, {}}));
}

TEST_CASE("an existential may absorb a query variable confined to the piece") {
  // q = ?() <- E(b,x): x is existential in q and occurs only in the piece,
  // so the extension rule E(u,v) -> ? z : E(v,z) applies and leaves E(u,v)'s body
  RuleSet ext = parse_rules("E(u,v) -> ? z : E(v,z) .");
  CQ q{{e(constant("b"), variable("x"))}, {}};
  auto results = rewrite_step(q, ext.rules()[0]);
  REQUIRE(results.size() == 1);
  CHECK(isomorphic(results[0], CQ{{e(variable("u"), constant("b"))}, {}}));
}

TEST_CASE("distinct rule existentials never merge") {
  RuleSet rs = parse_rules("A(x) -> ? z, w : E(z,w) .");
  // E(y,y) would force z = w
  CQ q{{e(variable("y"), variable("y"))}, {}};
  CHECK(rewrite_step(q, rs.rules()[0]).empty());
}

TEST_CASE("rewriting the loop under the pair rules converges onto a single edge") {
  RewritingRun run = ucq_rewrite(corpus_query("loop.cq"), corpus_rules("pair.rules"));
  CHECK(run.status == RewriteStatus::Converged);
  CHECK(has_disjunct_isomorphic_to(run.result(), CQ{{e(variable("x"), variable("y"))}, {}}));
  // cumulative snapshots are monotone
  for (std::size_t i = 0; i + 1 < run.generations.size(); ++i)
    CHECK(run.generations[i].disjuncts().size() <=
          run.generations[i + 1].disjuncts().size());
}

TEST_CASE("rewriting the loop under extension plus transitivity diverges") {
  RewriteBudget budget;
  budget.max_generations = 6;
  RewritingRun run = ucq_rewrite(corpus_query("loop.cq"), corpus_rules("ex1.rules"), budget);
  CHECK(run.status == RewriteStatus::BudgetExceeded);
  // generation sizes grow strictly: ever longer cycles, none subsumed
  for (std::size_t i = 0; i + 1 < run.generations.size(); ++i)
    CHECK(run.generations[i].disjuncts().size() <
          run.generations[i + 1].disjuncts().size());
}

TEST_CASE("subsumption prunes rewritings that map into existing disjuncts") {
  RuleSet rs = parse_rules("B(x) -> A(x) .\nC(x) -> A(x) .");
  CQ q{{Atom{Predicate{"A", 1}, {variable("x")}}}, {variable("x")}};
  RewritingRun run = ucq_rewrite(q, rs);
  CHECK(run.status == RewriteStatus::Converged);
  CHECK(run.result().disjuncts().size() == 3);  // A(x) | B(x) | C(x), nothing else
}

TEST_CASE("canonical_form renames deterministically and is idempotent") {
  CQ q{{e(variable("q"), variable("p")), e(variable("p"), variable("r"))}, {variable("p")}};
  CQ c = canonical_form(q);
  CHECK(c.answer() == std::vector<Term>{variable("a0")});
  CHECK(canonical_form(c) == c);
  // renaming-equivalent inputs collapse to the same form
  CQ q2{{e(variable("u"), variable("m")), e(variable("m"), variable("w"))}, {variable("m")}};
  CHECK(canonical_form(q2) == c);
}

TEST_CASE("injectivize enumerates retractions and fixes the answer tuple") {
  CQ edge{{e(variable("x"), variable("y"))}, {}};
  UCQ inj = injectivize(UCQ{{edge}, {}});
  // E(x,y) and its merge E(x,x)
  CHECK(inj.disjuncts().size() == 2);
  CHECK(has_disjunct_isomorphic_to(inj, CQ{{e(variable("x"), variable("x"))}, {}}));

  // idempotence up to canonical renaming
  UCQ twice = injectivize(inj);
  REQUIRE(twice.disjuncts().size() == inj.disjuncts().size());
  for (std::size_t i = 0; i < twice.disjuncts().size(); ++i)
    CHECK(canonical_form(twice.disjuncts()[i]) == canonical_form(inj.disjuncts()[i]));
}

TEST_CASE("injectivized entailment matches plain entailment (random)") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    Instance db = random_instance(rng, 6);
    std::vector<CQ> djs;
    std::uniform_int_distribution<int> nd(1, 3);
    int n = nd(rng);
    for (int i = 0; i < n; ++i) djs.push_back(random_boolean_cq(rng, 4));
    UCQ q{djs, {}};
    UCQ inj = injectivize(q);

    bool plain = false;
    for (const auto& d : q.disjuncts())
      plain = plain || !brute_force_homs(d.atoms(), db.atoms()).empty();
    bool inj_injective = entails(db, inj, {}, true).has_value();
    bool inj_plain = entails(db, inj, {}, false).has_value();
    CHECK(plain == inj_injective);
    CHECK(plain == inj_plain);
  }
}

TEST_CASE("least deciding depth probes the chase") {
  RuleSet pair = corpus_rules("pair.rules");
  CQ loop = corpus_query("loop.cq");
  std::vector<Instance> dbs{corpus_facts("ab.facts")};

  // the pair loop lands at depth 2: E(b,_n1) and E(a,b) short-circuit to E(b,b)
  auto k = least_deciding_depth(loop, pair, dbs, 4);
  REQUIRE(k.has_value());
  CHECK(*k == 2);

  // a probe that needs its whole budget reports no bound
  CHECK(!least_deciding_depth(loop, pair, dbs, 2).has_value());

  // never entailed: depth 0 decides
  CQ never{{Atom{Predicate{"Z", 1}, {variable("x")}}}, {}};
  auto zero = least_deciding_depth(never, pair, dbs, 4);
  REQUIRE(zero.has_value());
  CHECK(*zero == 0);
}
