#include "erkit/model.hpp"

#include <algorithm>

namespace erkit {

Atom top_atom() { return Atom{Predicate{"true", 0}, {}}; }

std::set<Term> terms_of(const Atom& atom) {
  return {atom.args.begin(), atom.args.end()};
}

std::set<Term> terms_of(const AtomSet& atoms) {
  std::set<Term> out;
  for (const auto& a : atoms) out.insert(a.args.begin(), a.args.end());
  return out;
}

std::set<Term> variables_of(const AtomSet& atoms) {
  std::set<Term> out;
  for (const auto& a : atoms)
    for (const auto& t : a.args)
      if (t.kind != TermKind::Constant) out.insert(t);
  return out;
}

Signature signature_of(const AtomSet& atoms) {
  Signature sig;
  for (const auto& a : atoms) {
    auto [it, fresh] = sig.emplace(a.pred.name, a.pred.arity);
    if (!fresh && it->second != a.pred.arity)
      throw Error("predicate " + a.pred.name + " used with conflicting arities");
  }
  return sig;
}

int max_arity(const AtomSet& atoms) {
  int m = 0;
  for (const auto& a : atoms) m = std::max(m, a.pred.arity);
  return m;
}

Atom apply_substitution(const Atom& atom, const Subst& sigma) {
  std::vector<Term> args = atom.args;
  for (auto& t : args) {
    auto it = sigma.find(t);
    if (it != sigma.end()) t = it->second;
  }
  return Atom{atom.pred, std::move(args)};
}

AtomSet apply_substitution(const AtomSet& atoms, const Subst& sigma) {
  AtomSet out;
  for (const auto& a : atoms) out.insert(apply_substitution(a, sigma));
  return out;
}

Instance Instance::restrict_to(const std::set<std::string>& keep) const {
  AtomSet out;
  for (const auto& a : atoms_)
    if (keep.count(a.pred.name)) out.insert(a);
  return Instance{std::move(out)};
}

Instance disjoint_union(const Instance& i1, const Instance& i2) {
  std::set<std::string> taken;
  for (const auto& t : i1.adom()) taken.insert(t.name);
  for (const auto& t : i2.adom()) taken.insert(t.name);

  Subst rename;
  for (const auto& t : i2.adom()) {
    int k = 1;
    std::string fresh = t.name + "_" + std::to_string(k);
    while (taken.count(fresh)) fresh = t.name + "_" + std::to_string(++k);
    taken.insert(fresh);
    rename[t] = Term{t.kind, fresh};
  }

  AtomSet out = i1.atoms();
  for (const auto& a : apply_substitution(i2.atoms(), rename)) out.insert(a);
  return Instance{std::move(out)};
}

Rule::Rule(std::string id, AtomSet body, AtomSet head)
    : id_(std::move(id)), body_(std::move(body)), head_(std::move(head)) {
  if (body_.empty()) throw Error("rule " + id_ + ": empty body");
  if (head_.empty()) throw Error("rule " + id_ + ": empty head");
  std::set<Term> bv = variables_of(body_);
  std::set<Term> hv = variables_of(head_);
  for (const auto& v : hv) (bv.count(v) ? frontier_ : existentials_).insert(v);
}

RuleSet::RuleSet(std::vector<Rule> rules) : rules_(std::move(rules)) {
  signature();  // validates arity consistency across rules
}

void RuleSet::add(Rule rule) {
  rules_.push_back(std::move(rule));
  signature();
}

const Rule& RuleSet::by_id(const std::string& id) const {
  for (const auto& r : rules_)
    if (r.id() == id) return r;
  throw Error("unknown rule id: " + id);
}

Signature RuleSet::signature() const {
  AtomSet all;
  for (const auto& r : rules_) {
    all.insert(r.body().begin(), r.body().end());
    all.insert(r.head().begin(), r.head().end());
  }
  return signature_of(all);
}

CQ::CQ(AtomSet atoms, std::vector<Term> answer)
    : atoms_(std::move(atoms)), answer_(std::move(answer)) {
  if (atoms_.empty()) throw Error("query with empty atom set");
  std::set<Term> vars = variables_of(atoms_);
  for (const auto& v : answer_)
    if (!vars.count(v)) throw Error("answer variable " + v.name + " does not occur in the query");
}

std::set<Term> CQ::answer_support() const {
  return {answer_.begin(), answer_.end()};
}

std::set<Term> CQ::existential_variables() const {
  std::set<Term> out = variables();
  for (const auto& v : answer_) out.erase(v);
  return out;
}

UCQ::UCQ(std::vector<CQ> disjuncts, std::vector<Term> answer)
    : disjuncts_(std::move(disjuncts)), answer_(std::move(answer)) {
  for (const auto& d : disjuncts_)
    if (d.answer().size() != answer_.size())
      throw Error("disjunct answer tuple length differs from the union's");
}

std::set<std::vector<Term>> specializations(const std::vector<Term>& tuple) {
  std::vector<Term> vars;
  for (const auto& t : tuple)
    if (std::find(vars.begin(), vars.end(), t) == vars.end()) vars.push_back(t);
  const std::size_t n = vars.size();
  if (n > 12) throw Error("specializations: too many distinct variables");
  if (n == 0) return {tuple};  // the empty retraction

  std::set<std::vector<Term>> out;
  // A specialization is induced by an idempotent retraction on the variables:
  // pick the fixpoint set, map every other variable onto some fixpoint.
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> fixed, moved;
    for (std::size_t i = 0; i < n; ++i)
      ((mask >> i) & 1 ? fixed : moved).push_back(i);

    std::vector<std::size_t> choice(moved.size(), 0);
    while (true) {
      std::map<Term, Term> f;
      for (std::size_t i : fixed) f[vars[i]] = vars[i];
      for (std::size_t j = 0; j < moved.size(); ++j) f[vars[moved[j]]] = vars[fixed[choice[j]]];
      std::vector<Term> spec;
      spec.reserve(tuple.size());
      for (const auto& t : tuple) spec.push_back(f.at(t));
      out.insert(std::move(spec));

      std::size_t j = 0;
      for (; j < moved.size(); ++j) {
        if (++choice[j] < fixed.size()) break;
        choice[j] = 0;
      }
      if (j == moved.size()) break;
    }
  }
  if (tuple.empty()) out.insert({});
  return out;
}

bool compatible_with(const std::vector<Term>& t, const std::vector<Term>& pattern) {
  if (t.size() != pattern.size()) return false;
  std::map<Term, Term> seen;
  for (std::size_t i = 0; i < t.size(); ++i) {
    auto [it, fresh] = seen.emplace(pattern[i], t[i]);
    if (!fresh && it->second != t[i]) return false;
  }
  return true;
}

}  // namespace erkit
