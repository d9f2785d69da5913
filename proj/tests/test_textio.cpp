#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "erkit/chase.hpp"
#include "erkit/textio.hpp"
#include "helpers.hpp"

using namespace erkit;
using namespace erkit::testing;

TEST_CASE("rules parse with declared existentials and round-trip") {
  RuleSet rs = parse_rules("E(x,y) -> ? z : E(y,z) .\nE(x,y), E(y,z) -> E(x,z) .");
  REQUIRE(rs.size() == 2);
  const Rule& r1 = rs.rules()[0];
  CHECK(r1.existentials() == std::set<Term>{variable("z")});
  CHECK(r1.frontier() == std::set<Term>{variable("y")});
  CHECK(rs.rules()[1].is_datalog());

  RuleSet again = parse_rules(to_text(rs));
  CHECK(to_text(again) == to_text(rs));
}

TEST_CASE("a true body parses to the nullary fact") {
  RuleSet rs = parse_rules("true -> ? w : T0(w) .");
  REQUIRE(rs.size() == 1);
  CHECK(rs.rules()[0].body() == AtomSet{top_atom()});
  CHECK(rs.rules()[0].frontier().empty());
  RuleSet again = parse_rules(to_text(rs));
  CHECK(to_text(again) == to_text(rs));
}

TEST_CASE("facts are ground and parse constants") {
  Instance db = parse_facts("E(a,b).\nA(c).\n");
  CHECK(db.contains(Atom{Predicate{"E", 2}, {constant("a"), constant("b")}}));
  CHECK(db.contains(Atom{Predicate{"A", 1}, {constant("c")}}));
  Instance again = parse_facts(to_text(db));
  CHECK(again == db);
}

TEST_CASE("queries parse answer tuples") {
  CQ boolean = parse_query("?() <- E(x,x) .");
  CHECK(boolean.answer().empty());
  CHECK(boolean.atoms() == AtomSet{Atom{Predicate{"E", 2}, {variable("x"), variable("x")}}});

  CQ binary = parse_query("?(x,y) <- E(x,y) .");
  CHECK(binary.answer() == std::vector<Term>{variable("x"), variable("y")});
  CHECK(to_text(parse_query(to_text(binary))) == to_text(binary));
}

TEST_CASE("parse errors carry source positions") {
  CHECK_THROWS_AS(parse_rules("E(x,y -> E(y,x) ."), ParseError);
  CHECK_THROWS_AS(parse_rules("e(x,y) -> E(y,x) ."), ParseError);   // lowercase predicate
  CHECK_THROWS_AS(parse_rules("E(x,y) -> E(y,w) ."), ParseError);   // undeclared head var
  CHECK_THROWS_AS(parse_rules("E(x,y) -> ? x : E(y,x) ."), ParseError);  // existential in body
  CHECK_THROWS_AS(parse_rules("E(x) -> A(x) .\nE(x,y) -> A(x) ."), ParseError);  // arity clash
  CHECK_THROWS_AS(parse_rules("E(x,y) -> ."), ParseError);          // empty head
  CHECK_THROWS_AS(parse_query("?(x) <- E(x,y) . trailing"), ParseError);
  CHECK_THROWS_AS(parse_query("?(w) <- E(x,y) ."), ParseError);     // answer var missing

  try {
    parse_rules("E(x,y ->", "f.rules");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).rfind("f.rules:1:", 0) == 0);
  }
}

TEST_CASE("comments and blank lines are ignored") {
  RuleSet rs = parse_rules("% comment\n\nE(x,y) -> A(x) .  % trailing\n");
  CHECK(rs.size() == 1);
}

TEST_CASE("the whole corpus round-trips") {
  for (const auto* name : {"ex1.rules", "pair.rules", "c1.rules", "c2.rules", "c3.rules",
                           "c4.rules", "c5.rules", "p1.rules", "p2.rules", "p3.rules",
                           "p4.rules", "p5.rules"}) {
    RuleSet rs = corpus_rules(name);
    CHECK(to_text(parse_rules(to_text(rs))) == to_text(rs));
  }
  Instance ab = corpus_facts("ab.facts");
  CHECK(parse_facts(to_text(ab)) == ab);
  for (const auto* name : {"loop.cq", "edge.cq"}) {
    CQ q = corpus_query(name);
    CHECK(to_text(parse_query(to_text(q))) == to_text(q));
  }
}

TEST_CASE("json trace rendering exposes steps and provenance") {
  RuleSet rs = corpus_rules("ex1.rules");
  ChaseTrace trace = chase(corpus_facts("ab.facts"), rs, 2);
  std::string json = emit_json(trace);
  CHECK(json.find("\"steps\"") != std::string::npos);
  CHECK(json.find("\"terms\"") != std::string::npos);
  CHECK(json.find("\"frontier\"") != std::string::npos);
  CHECK(json.find("\"timestamp\"") != std::string::npos);
  CHECK(json.find("\"rule\"") != std::string::npos);
  CHECK(json.back() == '\n');
  CHECK(emit_json(trace) == json);  // deterministic
}

TEST_CASE("dot rendering handles unary and binary atoms only") {
  Instance db = parse_facts("E(a,b).\nA(a).");
  std::string dot = emit_dot(db);
  CHECK(dot.rfind("digraph", 0) == 0);
  CHECK(dot.find("\"a\" -> \"b\"") != std::string::npos);
  CHECK(dot.find("A") != std::string::npos);

  Instance ternary = parse_facts("T(a,b,c).");
  CHECK_THROWS_AS(emit_dot(ternary), Error);
}
