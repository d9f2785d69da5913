#ifndef ERKIT_TESTS_HELPERS_HPP
#define ERKIT_TESTS_HELPERS_HPP

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "erkit/model.hpp"
#include "erkit/textio.hpp"

namespace erkit::testing {

inline std::string corpus_dir() {
  const char* dir = std::getenv("ERKIT_CORPUS_DIR");
  if (!dir) throw Error("ERKIT_CORPUS_DIR is not set");
  return dir;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline RuleSet corpus_rules(const std::string& name) {
  return parse_rules(slurp(corpus_dir() + "/" + name), name);
}

inline Instance corpus_facts(const std::string& name) {
  return parse_facts(slurp(corpus_dir() + "/" + name), name);
}

inline CQ corpus_query(const std::string& name) {
  return parse_query(slurp(corpus_dir() + "/" + name), name);
}

/// Exhaustive homomorphism enumeration by brute force: every map from the
/// non-constant terms of `src` into the active domain of `dst`. Slow but
/// obviously correct; the oracle for the backtracking searcher.
inline std::vector<Subst> brute_force_homs(const AtomSet& src, const AtomSet& dst,
                                           const Subst& seed = {}, bool injective = false) {
  std::vector<Term> vars;
  for (const auto& t : terms_of(src))
    if (t.kind != TermKind::Constant) vars.push_back(t);
  std::vector<Term> pool;
  for (const auto& t : terms_of(dst)) pool.push_back(t);

  std::vector<Subst> found;
  std::vector<std::size_t> pick(vars.size(), 0);
  while (true) {
    Subst h = seed;
    bool compatible = true;
    for (std::size_t i = 0; i < vars.size() && compatible; ++i) {
      auto it = h.find(vars[i]);
      if (it != h.end())
        compatible = it->second == pool[pick[i]];
      else
        h[vars[i]] = pool[pick[i]];
    }
    if (compatible) {
      bool ok = true;
      for (const auto& a : src)
        if (ok && !dst.count(apply_substitution(a, h))) ok = false;
      if (ok && injective) {
        // injectivity is required among the mapped terms; constants are fixed
        // pointwise and do not block a variable from landing on them
        std::set<Term> image;
        for (const auto& t : terms_of(src))
          if (t.kind != TermKind::Constant && !image.insert(h.at(t)).second) ok = false;
      }
      if (ok) {
        for (const auto& t : terms_of(src))
          if (t.kind == TermKind::Constant) h[t] = t;
        found.push_back(h);
      }
    }
    std::size_t i = 0;
    for (; i < vars.size(); ++i) {
      if (++pick[i] < pool.size()) break;
      pick[i] = 0;
    }
    if (i == vars.size() || vars.empty()) break;
  }
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  return found;
}

/// Random instance over E/2 and A/1 with terms drawn from a small pool.
inline Instance random_instance(std::mt19937& rng, int max_atoms) {
  std::vector<Term> pool{constant("a"), constant("b"), null_term("n1"), null_term("n2")};
  std::uniform_int_distribution<int> natoms(1, max_atoms);
  std::uniform_int_distribution<std::size_t> term(0, pool.size() - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  AtomSet atoms;
  int n = natoms(rng);
  for (int i = 0; i < n; ++i) {
    if (coin(rng))
      atoms.insert(Atom{Predicate{"E", 2}, {pool[term(rng)], pool[term(rng)]}});
    else
      atoms.insert(Atom{Predicate{"A", 1}, {pool[term(rng)]}});
  }
  return Instance{atoms};
}

/// Random Boolean CQ over E/2 and A/1 with up to `max_atoms` atoms.
inline CQ random_boolean_cq(std::mt19937& rng, int max_atoms) {
  std::vector<Term> pool{variable("x"), variable("y"), variable("z"), constant("a")};
  std::uniform_int_distribution<int> natoms(1, max_atoms);
  std::uniform_int_distribution<std::size_t> term(0, pool.size() - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  AtomSet atoms;
  int n = natoms(rng);
  for (int i = 0; i < n; ++i) {
    if (coin(rng))
      atoms.insert(Atom{Predicate{"E", 2}, {pool[term(rng)], pool[term(rng)]}});
    else
      atoms.insert(Atom{Predicate{"A", 1}, {pool[term(rng)]}});
  }
  return CQ{atoms, {}};
}

}  // namespace erkit::testing

#endif  // ERKIT_TESTS_HELPERS_HPP
