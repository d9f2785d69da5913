#include "erkit/rewrite.hpp"

#include <algorithm>
#include <map>

namespace erkit {

namespace {

/// Union-find over terms for unification.
class Unifier {
 public:
  Term find(const Term& t) {
    auto it = parent_.find(t);
    if (it == parent_.end()) return t;
    Term root = find(it->second);
    parent_[t] = root;
    return root;
  }

  bool unite(const Term& a, const Term& b) {
    Term ra = find(a), rb = find(b);
    if (ra == rb) return true;
    if (ra.kind == TermKind::Constant && rb.kind == TermKind::Constant) return false;
    // Keep constants as roots so classes never lose them.
    if (rb.kind == TermKind::Constant) std::swap(ra, rb);
    parent_[rb] = ra;
    return true;
  }

  std::map<Term, std::set<Term>> classes(const std::set<Term>& universe) {
    std::map<Term, std::set<Term>> out;
    for (const auto& t : universe) out[find(t)].insert(t);
    return out;
  }

 private:
  std::map<Term, Term> parent_;
};

Rule rename_apart(const Rule& rho, const std::set<Term>& avoid_vars) {
  std::set<std::string> avoid;
  for (const auto& v : avoid_vars) avoid.insert(v.name);
  Subst rename;
  int k = 0;
  std::set<Term> rule_vars = variables_of(rho.body());
  for (const auto& v : variables_of(rho.head())) rule_vars.insert(v);
  for (const auto& v : rule_vars) {
    std::string fresh;
    do fresh = "v" + std::to_string(++k);
    while (avoid.count(fresh));
    rename[v] = variable(fresh);
  }
  return Rule{rho.id(), apply_substitution(rho.body(), rename),
              apply_substitution(rho.head(), rename)};
}

}  // namespace

std::vector<CQ> rewrite_step(const CQ& q, const Rule& rho_in) {
  const Rule rho = rename_apart(rho_in, q.variables());
  const std::vector<Atom> q_atoms(q.atoms().begin(), q.atoms().end());
  const std::vector<Atom> head(rho.head().begin(), rho.head().end());

  // Occurrence count of each q-variable across q's atoms, to decide "occurs
  // solely in the piece".
  std::map<Term, int> occurrences;
  for (const auto& a : q.atoms())
    for (const auto& t : a.args)
      if (t.kind != TermKind::Constant) ++occurrences[t];

  const std::set<Term> answer_vars = q.answer_support();
  std::set<CQ> results;

  // choice[i] = index into `head` the i-th query atom unifies with, or -1.
  std::vector<int> choice(q_atoms.size(), -1);
  auto emit = [&]() {
    Unifier uf;
    for (std::size_t i = 0; i < q_atoms.size(); ++i) {
      if (choice[i] < 0) continue;
      const Atom& ha = head[choice[i]];
      if (q_atoms[i].pred != ha.pred) return;
      for (std::size_t k = 0; k < ha.args.size(); ++k)
        if (!uf.unite(q_atoms[i].args[k], ha.args[k])) return;
    }

    std::set<Term> universe;
    for (std::size_t i = 0; i < q_atoms.size(); ++i)
      if (choice[i] >= 0) {
        auto ts = terms_of(q_atoms[i]);
        universe.insert(ts.begin(), ts.end());
        auto hs = terms_of(head[choice[i]]);
        universe.insert(hs.begin(), hs.end());
      }
    auto classes = uf.classes(universe);

    // Count, per q-variable, how many occurrences lie inside the piece.
    std::map<Term, int> piece_occurrences;
    for (std::size_t i = 0; i < q_atoms.size(); ++i)
      if (choice[i] >= 0)
        for (const auto& t : q_atoms[i].args)
          if (t.kind != TermKind::Constant) ++piece_occurrences[t];

    // An existential variable of the rule may be unified only with
    // existential variables of q confined to the piece.
    for (const auto& z : rho.existentials()) {
      auto cls = classes.find(uf.find(z));
      if (cls == classes.end()) continue;  // z's head atom not in the unifier
      for (const auto& member : cls->second) {
        if (member == z) continue;
        bool q_var = member.kind != TermKind::Constant && occurrences.count(member);
        if (!q_var || answer_vars.count(member)) return;
        auto po = piece_occurrences.find(member);
        if (po == piece_occurrences.end() || po->second != occurrences.at(member)) return;
      }
    }

    // Representative per class: a constant if present, else the least answer
    // variable, else the least q-variable, else the least rule variable.
    Subst u;
    for (const auto& [root, members] : classes) {
      std::optional<Term> rep;
      auto better = [&](const Term& t) {
        auto rank = [&](const Term& m) {
          if (m.kind == TermKind::Constant) return 0;
          if (answer_vars.count(m)) return 1;
          if (occurrences.count(m)) return 2;
          return 3;
        };
        return !rep || rank(t) < rank(*rep) || (rank(t) == rank(*rep) && t < *rep);
      };
      for (const auto& m : members)
        if (better(m)) rep = m;
      for (const auto& m : members) u[m] = *rep;
    }

    AtomSet atoms;
    for (std::size_t i = 0; i < q_atoms.size(); ++i)
      if (choice[i] < 0) atoms.insert(apply_substitution(q_atoms[i], u));
    for (const auto& b : rho.body()) atoms.insert(apply_substitution(b, u));
    atoms.erase(top_atom());
    if (atoms.empty()) atoms.insert(top_atom());

    std::vector<Term> answer;
    for (const auto& v : q.answer()) {
      auto it = u.find(v);
      answer.push_back(it == u.end() ? v : it->second);
    }
    results.insert(core(CQ{std::move(atoms), std::move(answer)}));
  };

  // Enumerate all nonempty piece assignments.
  auto rec = [&](auto&& self, std::size_t i, bool any) -> void {
    if (i == q_atoms.size()) {
      if (any) emit();
      return;
    }
    choice[i] = -1;
    self(self, i + 1, any);
    for (std::size_t j = 0; j < head.size(); ++j)
      if (head[j].pred == q_atoms[i].pred) {
        choice[i] = static_cast<int>(j);
        self(self, i + 1, true);
      }
    choice[i] = -1;
  };
  rec(rec, 0, false);

  return {results.begin(), results.end()};
}

namespace {

bool subsumed_by(const CQ& existing, const CQ& candidate) {
  Subst seed;
  for (std::size_t i = 0; i < existing.answer().size(); ++i) {
    auto [it, fresh] = seed.emplace(existing.answer()[i], candidate.answer()[i]);
    if (!fresh && it->second != candidate.answer()[i]) return false;
  }
  return find_hom(existing.atoms(), candidate.atoms(), seed).has_value();
}

}  // namespace

RewritingRun ucq_rewrite(const CQ& q, const RuleSet& rules, RewriteBudget budget) {
  if (budget.max_generations < 0 || budget.max_cqs == 0)
    throw Error("rewrite: budget must be positive");

  RewritingRun run;
  run.input = q;
  std::vector<CQ> kept{core(q)};
  std::vector<CQ> frontier = kept;
  run.generations.emplace_back(kept, q.answer());

  for (int gen = 1; gen <= budget.max_generations; ++gen) {
    std::set<CQ> candidates;
    for (const auto& cq : frontier)
      for (const auto& rho : rules.rules())
        for (auto& produced : rewrite_step(cq, rho)) candidates.insert(std::move(produced));

    std::vector<CQ> fresh;
    for (const auto& cand : candidates) {
      bool drop = false;
      for (const auto& old : kept)
        if (subsumed_by(old, cand)) {
          drop = true;
          break;
        }
      for (const auto& nw : fresh) {
        if (drop) break;
        if (subsumed_by(nw, cand)) drop = true;
      }
      if (!drop) fresh.push_back(cand);
    }

    if (fresh.empty()) {
      run.status = RewriteStatus::Converged;
      return run;
    }
    kept.insert(kept.end(), fresh.begin(), fresh.end());
    frontier = std::move(fresh);
    run.generations.emplace_back(kept, q.answer());
    if (kept.size() > budget.max_cqs) break;
  }
  run.status = RewriteStatus::BudgetExceeded;
  return run;
}

CQ canonical_form(const CQ& q) {
  Subst naming;
  int a = 0, e = 0;
  for (const auto& v : q.answer())
    if (v.kind != TermKind::Constant && !naming.count(v))
      naming[v] = variable("a" + std::to_string(a++));

  auto all_named = [&]() {
    for (const auto& v : q.variables())
      if (!naming.count(v)) return false;
    return true;
  };

  while (!all_named()) {
    // Render atoms under the partial naming, pick the least render that still
    // has an unnamed variable, and name its variables left to right.
    std::vector<std::pair<std::string, Atom>> renders;
    for (const auto& atom : q.atoms()) {
      std::string r = atom.pred.name + "(";
      for (const auto& t : atom.args) {
        auto it = naming.find(t);
        r += t.kind == TermKind::Constant ? "c:" + t.name
                                          : (it != naming.end() ? it->second.name : "*");
        r += ",";
      }
      renders.emplace_back(r + ")", atom);
    }
    std::sort(renders.begin(), renders.end());
    for (const auto& [render, atom] : renders) {
      bool named_one = false;
      for (const auto& t : atom.args)
        if (t.kind != TermKind::Constant && !naming.count(t)) {
          naming[t] = variable("e" + std::to_string(e++));
          named_one = true;
        }
      if (named_one) break;
    }
  }

  std::vector<Term> answer;
  for (const auto& v : q.answer()) {
    auto it = naming.find(v);
    answer.push_back(it == naming.end() ? v : it->second);
  }
  return CQ{apply_substitution(q.atoms(), naming), std::move(answer)};
}

UCQ injectivize(const UCQ& q) {
  std::set<CQ> out;
  for (const auto& d : q.disjuncts()) {
    const std::set<Term> var_set = d.variables();
    std::vector<Term> vars(var_set.begin(), var_set.end());
    if (vars.empty()) {
      out.insert(canonical_form(d));
      continue;
    }
    for (const auto& spec : specializations(vars)) {
      Subst sigma;
      for (std::size_t i = 0; i < vars.size(); ++i) sigma[vars[i]] = spec[i];
      std::vector<Term> answer;
      for (const auto& v : d.answer()) answer.push_back(sigma.at(v));
      out.insert(canonical_form(CQ{apply_substitution(d.atoms(), sigma), std::move(answer)}));
    }
  }
  return UCQ{{out.begin(), out.end()}, q.answer()};
}

std::optional<int> least_deciding_depth(const CQ& q, const RuleSet& rules,
                                        const std::vector<Instance>& instances, int kmax,
                                        std::size_t max_atoms) {
  if (kmax < 0) throw Error("least_deciding_depth: negative depth bound");
  int needed = 0;
  for (const auto& db : instances) {
    ChaseTrace trace = chase(db, rules, kmax, max_atoms);
    auto entailed_at = [&](int k) {
      const auto& steps = trace.steps();
      std::size_t i = std::min<std::size_t>(k, steps.size() - 1);
      return find_hom(q.atoms(), steps[i].atoms()).has_value();
    };
    if (!entailed_at(kmax)) continue;
    int k = 0;
    while (!entailed_at(k)) ++k;
    needed = std::max(needed, k);
  }
  // A probe that needs the whole budget cannot distinguish "exactly kmax"
  // from "growing with the instance"; report no bound in that case.
  if (needed == kmax && kmax > 0) return std::nullopt;
  return needed;
}

}  // namespace erkit
