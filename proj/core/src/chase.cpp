#include "erkit/chase.hpp"

#include <algorithm>

namespace erkit {

int ChaseTrace::timestamp(const Term& t) const {
  for (std::size_t i = 0; i < steps_.size(); ++i)
    if (terms_of(steps_[i].atoms()).count(t)) return static_cast<int>(i);
  throw Error("timestamp of a term unknown to the trace: " + t.name);
}

bool ChaseTrace::knows(const Term& t) const {
  return terms_of(result().atoms()).count(t) > 0;
}

std::vector<Trigger> triggers(const Instance& db, const RuleSet& rules) {
  std::vector<Trigger> out;
  for (const auto& rule : rules.rules()) {
    std::set<Subst> seen;
    for (const auto& h : find_all_homs(rule.body(), db.atoms())) {
      // Trigger identity is the map restricted to body variables; drop the
      // constant self-mappings find_all_homs totalizes with.
      Subst restricted;
      for (const auto& [s, t] : h)
        if (s.kind != TermKind::Constant) restricted[s] = t;
      if (seen.insert(restricted).second) out.push_back(Trigger{rule.id(), restricted});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

AtomSet trigger_output(const Rule& rule, const Subst& body_map, int& null_counter,
                       Subst* out_extension) {
  Subst full = body_map;
  for (const auto& z : rule.existentials())
    full[z] = null_term("_n" + std::to_string(++null_counter));
  if (out_extension) *out_extension = full;
  return apply_substitution(rule.head(), full);
}

namespace {

ChaseTrace run_chase(const Instance& db, const RuleSet& rules, int depth, std::size_t max_atoms,
                     bool stop_on_fixpoint) {
  std::vector<Instance> steps{db};
  std::map<Term, NullMeta> meta;
  std::set<Trigger> fired;
  int null_counter = 0;

  for (int step = 1; step <= depth; ++step) {
    const Instance& current = steps.back();
    AtomSet next = current.atoms();
    bool any_new_trigger = false;

    for (const auto& tau : triggers(current, rules)) {
      if (!fired.insert(tau).second) continue;
      any_new_trigger = true;
      const Rule& rule = rules.by_id(tau.rule_id);

      Subst extended;
      AtomSet out = trigger_output(rule, tau.body_map, null_counter, &extended);
      next.insert(out.begin(), out.end());

      std::set<Term> frontier_image;
      for (const auto& f : rule.frontier()) frontier_image.insert(extended.at(f));
      for (const auto& z : rule.existentials())
        meta.emplace(extended.at(z), NullMeta{step, tau, frontier_image});
    }

    if (!any_new_trigger)
      return ChaseTrace{std::move(steps), std::move(meta), ChaseStatus::Saturated};
    if (stop_on_fixpoint && next == current.atoms())
      return ChaseTrace{std::move(steps), std::move(meta), ChaseStatus::Saturated};

    steps.emplace_back(std::move(next));
    if (steps.back().size() > max_atoms)
      return ChaseTrace{std::move(steps), std::move(meta), ChaseStatus::BudgetExceeded};
  }
  return ChaseTrace{std::move(steps), std::move(meta), ChaseStatus::Completed};
}

}  // namespace

ChaseTrace chase(const Instance& db, const RuleSet& rules, int depth, std::size_t max_atoms) {
  if (depth < 0) throw Error("chase: negative depth");
  return run_chase(db, rules, depth, max_atoms, /*stop_on_fixpoint=*/false);
}

ChaseTrace saturate(const Instance& db, const RuleSet& rules, std::size_t max_atoms,
                    int max_steps) {
  ChaseTrace t = run_chase(db, rules, max_steps, max_atoms, /*stop_on_fixpoint=*/true);
  if (t.status() == ChaseStatus::Completed)
    return ChaseTrace{t.steps(), t.null_meta(), ChaseStatus::BudgetExceeded};
  return t;
}

ChaseOrder::ChaseOrder(const Instance& db) {
  if (max_arity(db.atoms()) > 2) throw Error("chase order requires an at-most-binary signature");
  std::map<Term, std::set<Term>> succ;
  std::set<Term> nodes;
  for (const auto& a : db.atoms()) {
    if (a.pred.arity != 2) continue;
    succ[a.args[0]].insert(a.args[1]);
    nodes.insert(a.args[0]);
    nodes.insert(a.args[1]);
  }
  // Small instances: transitive closure by iterated expansion.
  for (const auto& n : nodes) {
    std::vector<Term> work(succ[n].begin(), succ[n].end());
    std::set<Term>& r = reach_[n];
    while (!work.empty()) {
      Term t = work.back();
      work.pop_back();
      if (!r.insert(t).second) continue;
      auto it = succ.find(t);
      if (it != succ.end()) work.insert(work.end(), it->second.begin(), it->second.end());
    }
  }
}

bool ChaseOrder::reaches(const Term& s, const Term& t) const {
  auto it = reach_.find(s);
  return it != reach_.end() && it->second.count(t) > 0;
}

bool is_dag(const Instance& db) {
  ChaseOrder order(db);
  for (const auto& t : db.adom())
    if (order.reaches(t, t)) return false;
  return true;
}

}  // namespace erkit
