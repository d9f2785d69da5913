#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "erkit/surgery.hpp"
#include "erkit/textio.hpp"
#include "helpers.hpp"

using namespace erkit;
using namespace erkit::testing;

TEST_CASE("encode_db wraps the database into a single generating rule") {
  Instance db = corpus_facts("ab.facts");
  Rule enc = encode_db(db);
  CHECK(enc.body() == AtomSet{top_atom()});
  CHECK(enc.frontier().empty());
  CHECK(enc.existentials().size() == db.adom().size());
  // head atoms mirror the database with variables in place of its terms
  CHECK(enc.head().size() == db.size() - 1);  // the nullary fact is not encoded

  CHECK_THROWS_AS(encode_db(Instance{}), Error);
}

TEST_CASE("reify lowers everything to arity at most two") {
  Instance db = corpus_facts("c1.facts");  // T(a,b,c)
  Instance rdb = reify(db);
  CHECK(max_arity(rdb.atoms()) <= 2);
  // T(a,b,c) becomes three position atoms sharing one fresh identifier
  int positional = 0;
  std::set<Term> ids;
  for (const auto& a : rdb.atoms())
    if (a.pred.name.rfind("T_", 0) == 0) {
      ++positional;
      CHECK(a.args.size() == 2);
      CHECK(a.args[1].kind == TermKind::Null);
      ids.insert(a.args[1]);
    }
  CHECK(positional == 3);
  CHECK(ids.size() == 1);

  // binary and unary atoms pass through unchanged
  Instance small = corpus_facts("ab.facts");
  CHECK(reify(small) == small);
}

TEST_CASE("reify on rules uses variables as identifiers, existential in heads") {
  RuleSet rs = corpus_rules("c3.rules");  // A(x), B(y) -> ? z : T(x,y,z)
  RuleSet rrs = reify(rs);
  const Rule& r = rrs.rules()[0];
  CHECK(max_arity(r.head()) <= 2);
  CHECK(max_arity(r.body()) <= 2);
  // the fresh head identifier is existential alongside z
  CHECK(r.existentials().size() == 2);
  CHECK(r.frontier() == rs.rules()[0].frontier());
}

TEST_CASE("streamline splits existential rules into three phases") {
  RuleSet rs = corpus_rules("c2.rules");  // A(x) -> B(x); B(x) -> ? z : E(x,z)
  RuleSet s = streamline(rs);
  // the Datalog rule passes through; the existential one becomes three rules
  CHECK(s.size() == 4);
  int init = 0, ex = 0, dl = 0, untouched = 0;
  for (const auto& r : s.rules()) {
    if (r.id().find("_init") != std::string::npos) {
      ++init;
      CHECK(r.existentials().size() == 1);  // only the stage token is fresh
    } else if (r.id().find("_ex") != std::string::npos) {
      ++ex;
      CHECK(!r.is_datalog());
    } else if (r.id().find("_dl") != std::string::npos) {
      ++dl;
      CHECK(r.is_datalog());
    } else {
      ++untouched;
      CHECK(r.is_datalog());
    }
  }
  CHECK(init == 1);
  CHECK(ex == 1);
  CHECK(dl == 1);
  CHECK(untouched == 1);
  CHECK(max_arity(s.rules()[1].head()) <= 2);

  CHECK_THROWS_AS(streamline(corpus_rules("c3.rules")), Error);  // arity 3
}

TEST_CASE("body_rewrite adds the genuine shortcut for the chained rule set") {
  RuleSet rs = corpus_rules("c2.rules");
  RuleSet rw = body_rewrite(rs);
  CHECK(rw.size() >= rs.size());
  // the shortcut A(x) -> ? z : E(x,z) must appear
  RuleSet expect = parse_rules("A(x) -> ? z : E(x,z) .");
  bool found = false;
  for (const auto& r : rw.rules()) found = found || isomorphic(r, expect.rules()[0]);
  CHECK(found);
}

TEST_CASE("body_rewrite reports divergence via its own exception") {
  RewriteBudget tight;
  tight.max_generations = 4;
  CHECK_THROWS_AS(body_rewrite(corpus_rules("ex1.rules"), tight), RewritingBudgetExceeded);
  try {
    body_rewrite(corpus_rules("ex1.rules"), tight);
  } catch (const RewritingBudgetExceeded& e) {
    CHECK(!e.rule_id().empty());
  }
}

TEST_CASE("syntactic property checkers") {
  // p1 is already in the target shape
  RuleSet p1 = corpus_rules("p1.rules");
  CHECK(check_forward_existential(p1));
  CHECK(check_predicate_unique(p1));

  // a binary head atom whose second position is frontier violates the shape
  RuleSet bad = parse_rules("A(x) -> ? z : E(z,x) .");
  CHECK(!check_forward_existential(bad));

  // predicate repetition in an existential head
  RuleSet dup = parse_rules("A(x) -> ? z, w : E(x,z), E(x,w) .");
  CHECK(!check_predicate_unique(dup));

  // Datalog rules are unconstrained
  CHECK(check_forward_existential(parse_rules("E(x,y) -> E(y,x) .")));
  CHECK(check_predicate_unique(parse_rules("E(x,y) -> E(y,x), A(x) .")));
}

TEST_CASE("split_datalog partitions by existentials") {
  auto [dl, ex] = split_datalog(corpus_rules("ex1.rules"));
  CHECK(dl.size() == 1);
  CHECK(ex.size() == 1);
  CHECK(dl.rules()[0].is_datalog());
  CHECK(!ex.rules()[0].is_datalog());
}

TEST_CASE("per-surgery obligations hold on the hand-written corpus") {
  // each rule set saturates within depth 3, so the bounded checks are exact
  for (const auto* base : {"c1", "c2", "c3", "c4", "c5"}) {
    CAPTURE(base);
    RuleSet rs = corpus_rules(std::string(base) + ".rules");
    Instance db = corpus_facts(std::string(base) + ".facts");

    Obligation enc = encode_obligation(Instance{}, db, rs, 3);
    CHECK(enc.holds);

    Obligation rei = reify_obligation(db, rs, 3);
    CHECK(rei.holds);

    RuleSet binary = max_arity(db.atoms()) <= 2 &&
                             [&] {
                               for (const auto& r : rs.rules())
                                 if (max_arity(r.body()) > 2 || max_arity(r.head()) > 2)
                                   return false;
                               return true;
                             }()
                         ? rs
                         : reify(rs);
    Instance bdb = binary == rs ? db : reify(db);
    Obligation str = streamline_obligation(bdb, binary, 3);
    CHECK(str.holds);

    Obligation rew = body_rewrite_obligation(db, rs, 3);
    CHECK(rew.holds);
  }
}

TEST_CASE("streamline obligation holds on a recursive binary set") {
  Obligation str = streamline_obligation(corpus_facts("ab.facts"), corpus_rules("ex1.rules"), 2);
  CHECK(str.holds);
}

TEST_CASE("regalize produces the regal shape with passing obligations") {
  auto [regal, report] = regalize(corpus_facts("ab.facts"), corpus_rules("pair.rules"));
  CHECK(check_forward_existential(regal));
  CHECK(check_predicate_unique(regal));
  CHECK(report.all_hold());
  CHECK(!report.fresh_predicates.empty());
  CHECK(report.input_signature.count("E"));

  // quick: every chase atom over input terms appears in one step
  std::mt19937 rng(3);
  std::vector<Instance> probes;
  for (int i = 0; i < 20; ++i) probes.push_back(random_instance(rng, 5));
  QuickCheck qc = check_quick_empirical(regal, probes, 3);
  CHECK(qc.quick);
}

TEST_CASE("regalize surfaces divergence as RewritingBudgetExceeded") {
  RegalizeOptions opts;
  opts.budget.max_generations = 4;
  CHECK_THROWS_AS(regalize(corpus_facts("ab.facts"), corpus_rules("ex1.rules"), opts),
                  RewritingBudgetExceeded);
}
