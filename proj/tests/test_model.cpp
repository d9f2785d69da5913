#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "erkit/model.hpp"

using namespace erkit;

namespace {

Atom e(Term s, Term t) { return Atom{Predicate{"E", 2}, {std::move(s), std::move(t)}}; }
Atom a1(Term t) { return Atom{Predicate{"A", 1}, {std::move(t)}}; }

/// Number of idempotent endofunctions on n elements: every specialization of
/// a tuple of n distinct variables is a retraction of positions onto kept
/// variables, and vice versa.
long idempotent_maps(int n) {
  std::vector<int> f(n, 0);
  long count = 0;
  while (true) {
    bool idem = true;
    for (int i = 0; i < n && idem; ++i) idem = f[f[i]] == f[i];
    if (idem) ++count;
    int i = 0;
    for (; i < n; ++i) {
      if (++f[i] < n) break;
      f[i] = 0;
    }
    if (i == n) break;
  }
  return count;
}

}  // namespace

TEST_CASE("terms order by kind then name") {
  CHECK(constant("b") < variable("a"));
  CHECK(variable("z") < null_term("a"));
  CHECK(constant("a") < constant("b"));
  CHECK(constant("a") == constant("a"));
}

TEST_CASE("atom construction validates arity") {
  CHECK_NOTHROW(e(constant("a"), constant("b")));
  CHECK_THROWS_AS(Atom(Predicate{"E", 2}, {constant("a")}), Error);
  CHECK_THROWS_AS(Atom(Predicate{"A", 1}, {}), Error);
}

TEST_CASE("substitution application leaves unmapped terms alone") {
  Subst s{{variable("x"), constant("a")}};
  Atom before = e(variable("x"), variable("y"));
  Atom after = apply_substitution(before, s);
  CHECK(after == e(constant("a"), variable("y")));
  // constants are never rewritten even if present as keys is prevented by use
  CHECK(apply_substitution(after, s) == after);
}

TEST_CASE("substitution application distributes over atom sets") {
  Subst s{{variable("x"), null_term("n")}};
  AtomSet atoms{e(variable("x"), variable("x")), a1(variable("y"))};
  AtomSet image = apply_substitution(atoms, s);
  CHECK(image == AtomSet{e(null_term("n"), null_term("n")), a1(variable("y"))});
}

TEST_CASE("instances always contain the nullary fact") {
  Instance empty;
  CHECK(empty.size() == 1);
  CHECK(empty.contains(top_atom()));
  Instance one{AtomSet{e(constant("a"), constant("b"))}};
  CHECK(one.size() == 2);
  CHECK(one.contains(top_atom()));
}

TEST_CASE("active domain and signature") {
  Instance db{AtomSet{e(constant("a"), null_term("n")), a1(constant("a"))}};
  CHECK(db.adom() == std::set<Term>{constant("a"), null_term("n")});
  Signature sig = db.signature();
  CHECK(sig.at("E") == 2);
  CHECK(sig.at("A") == 1);
}

TEST_CASE("restrict_to keeps only the named predicates") {
  Instance db{AtomSet{e(constant("a"), constant("b")), a1(constant("a"))}};
  Instance only_e = db.restrict_to({"E"});
  CHECK(only_e.contains(e(constant("a"), constant("b"))));
  CHECK(!only_e.contains(a1(constant("a"))));
  CHECK(only_e.contains(top_atom()));
}

TEST_CASE("disjoint union renames the second instance apart") {
  Instance i1{AtomSet{e(constant("a"), constant("b"))}};
  Instance i2{AtomSet{e(constant("a"), null_term("n"))}};
  Instance u = disjoint_union(i1, i2);
  // one copy of each E-atom plus the shared nullary fact
  CHECK(u.size() == 3);
  std::set<Term> shared;
  for (const auto& t : i1.adom())
    if (u.adom().count(t)) shared.insert(t);
  CHECK(shared == i1.adom());  // the left copy is untouched
  for (const auto& t : i2.adom()) {
    bool renamed_away = true;
    for (const auto& a : u.atoms())
      if (a != e(constant("a"), constant("b")))
        for (const auto& arg : a.args) renamed_away = renamed_away && arg != t;
    // every original right-hand term has been renamed
    CHECK(renamed_away);
  }
}

TEST_CASE("rule frontier and existentials") {
  Rule r{"r1", {e(variable("x"), variable("y"))}, {e(variable("y"), variable("z"))}};
  CHECK(r.frontier() == std::set<Term>{variable("y")});
  CHECK(r.existentials() == std::set<Term>{variable("z")});
  CHECK(!r.is_datalog());

  Rule dl{"r2", {e(variable("x"), variable("y"))}, {a1(variable("x"))}};
  CHECK(dl.is_datalog());
  CHECK(dl.existentials().empty());
}

TEST_CASE("rule sets index by id and validate the shared signature") {
  RuleSet rs;
  rs.add(Rule{"r1", {a1(variable("x"))}, {e(variable("x"), variable("y"))}});
  CHECK(rs.by_id("r1").id() == "r1");
  CHECK_THROWS_AS(rs.by_id("nope"), Error);
  // conflicting arity for E
  CHECK_THROWS_AS(rs.add(Rule{"r2", {Atom{Predicate{"E", 1}, {variable("x")}}},
                              {a1(variable("x"))}}),
                  Error);
}

TEST_CASE("queries require answer variables to occur") {
  CHECK_NOTHROW(CQ(AtomSet{e(variable("x"), variable("y"))}, {variable("x")}));
  CHECK_THROWS_AS(CQ(AtomSet{e(variable("x"), variable("y"))}, {variable("w")}), Error);
}

TEST_CASE("existential variables of a query") {
  CQ q{AtomSet{e(variable("x"), variable("y"))}, {variable("x")}};
  CHECK(q.existential_variables() == std::set<Term>{variable("y")});
}

TEST_CASE("specializations enumerate exactly the idempotent retractions") {
  for (int n = 0; n <= 4; ++n) {
    std::vector<Term> tuple;
    for (int i = 0; i < n; ++i) tuple.push_back(variable("x" + std::to_string(i)));
    auto specs = specializations(tuple);
    CHECK(static_cast<long>(specs.size()) == idempotent_maps(n));
    CHECK(specs.count(tuple) == 1);  // the identity is always included
    for (const auto& s : specs) {
      CHECK(s.size() == tuple.size());
      // a specialization maps positions onto tuple variables, consistently
      for (const auto& t : s) CHECK(std::count(tuple.begin(), tuple.end(), t) == 1);
      CHECK(compatible_with(s, tuple));
    }
  }
}

TEST_CASE("specializations of a tuple with repeats respect the pattern") {
  std::vector<Term> tuple{variable("x"), variable("x")};
  auto specs = specializations(tuple);
  CHECK(specs == std::set<std::vector<Term>>{tuple});
}

TEST_CASE("compatible_with checks the equality pattern") {
  std::vector<Term> pattern{variable("x"), variable("y"), variable("x")};
  CHECK(compatible_with({constant("a"), constant("b"), constant("a")}, pattern));
  CHECK(!compatible_with({constant("a"), constant("b"), constant("c")}, pattern));
}
