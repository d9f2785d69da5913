#ifndef ERKIT_MODEL_HPP
#define ERKIT_MODEL_HPP

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

/// Core vocabulary: terms, atoms, instances, rules and queries.
///
/// All values are immutable once built and freely copyable; every container
/// is ordered so that iteration (and hence every derived artifact) is
/// deterministic.
namespace erkit {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when an internal consistency check fails (a bug, not bad input).
class SoundnessError : public Error {
 public:
  explicit SoundnessError(const std::string& msg) : Error(msg) {}
};

enum class TermKind { Constant, Variable, Null };

/// A term is a constant (frozen under homomorphisms), a variable, or a
/// labelled null introduced by the chase.
struct Term {
  TermKind kind = TermKind::Variable;
  std::string name;

  auto operator<=>(const Term&) const = default;
};

inline Term constant(std::string name) { return {TermKind::Constant, std::move(name)}; }
inline Term variable(std::string name) { return {TermKind::Variable, std::move(name)}; }
inline Term null_term(std::string name) { return {TermKind::Null, std::move(name)}; }

struct Predicate {
  std::string name;
  int arity = 0;

  auto operator<=>(const Predicate&) const = default;
};

struct Atom {
  Predicate pred;
  std::vector<Term> args;

  Atom() = default;
  Atom(Predicate p, std::vector<Term> a) : pred(std::move(p)), args(std::move(a)) {
    if (static_cast<int>(args.size()) != pred.arity)
      throw Error("atom " + pred.name + ": argument count does not match arity");
  }

  auto operator<=>(const Atom&) const = default;
};

using AtomSet = std::set<Atom>;

/// The nullary fact present in every instance.
Atom top_atom();

/// A substitution over variables and nulls; constants are never keys.
using Subst = std::map<Term, Term>;

/// Signature: predicate name -> arity. A name may carry only one arity.
using Signature = std::map<std::string, int>;

std::set<Term> terms_of(const Atom& atom);
std::set<Term> terms_of(const AtomSet& atoms);
std::set<Term> variables_of(const AtomSet& atoms);
Signature signature_of(const AtomSet& atoms);
int max_arity(const AtomSet& atoms);

/// Replaces every occurrence of a mapped term; unmapped arguments stay.
Atom apply_substitution(const Atom& atom, const Subst& sigma);
AtomSet apply_substitution(const AtomSet& atoms, const Subst& sigma);

/// A finite set of atoms, always containing the nullary fact.
class Instance {
 public:
  Instance() { atoms_.insert(top_atom()); }
  explicit Instance(AtomSet atoms) : atoms_(std::move(atoms)) { atoms_.insert(top_atom()); }

  const AtomSet& atoms() const { return atoms_; }
  bool contains(const Atom& a) const { return atoms_.count(a) > 0; }
  void add(const Atom& a) { atoms_.insert(a); }
  std::size_t size() const { return atoms_.size(); }

  std::set<Term> adom() const { return terms_of(atoms_); }
  Signature signature() const { return signature_of(atoms_); }

  /// Keeps only atoms whose predicate name is in `keep` (plus the top fact).
  Instance restrict_to(const std::set<std::string>& keep) const;

  auto operator<=>(const Instance&) const = default;

 private:
  AtomSet atoms_;
};

/// I1 together with a fresh-renamed copy of I2; the copies share no terms.
Instance disjoint_union(const Instance& i1, const Instance& i2);

/// An existential rule body -> exists z. head.
class Rule {
 public:
  Rule(std::string id, AtomSet body, AtomSet head);

  const std::string& id() const { return id_; }
  const AtomSet& body() const { return body_; }
  const AtomSet& head() const { return head_; }
  const std::set<Term>& frontier() const { return frontier_; }
  const std::set<Term>& existentials() const { return existentials_; }
  bool is_datalog() const { return existentials_.empty(); }

  auto operator<=>(const Rule&) const = default;

 private:
  std::string id_;
  AtomSet body_;
  AtomSet head_;
  std::set<Term> frontier_;
  std::set<Term> existentials_;
};

class RuleSet {
 public:
  RuleSet() = default;
  explicit RuleSet(std::vector<Rule> rules);

  const std::vector<Rule>& rules() const { return rules_; }
  bool empty() const { return rules_.empty(); }
  std::size_t size() const { return rules_.size(); }
  const Rule& by_id(const std::string& id) const;
  void add(Rule rule);

  Signature signature() const;

  auto operator<=>(const RuleSet&) const = default;

 private:
  std::vector<Rule> rules_;
};

/// Conjunctive query with an answer-variable tuple (empty tuple = Boolean).
class CQ {
 public:
  CQ() = default;
  CQ(AtomSet atoms, std::vector<Term> answer);

  const AtomSet& atoms() const { return atoms_; }
  const std::vector<Term>& answer() const { return answer_; }
  std::set<Term> answer_support() const;
  std::set<Term> variables() const { return variables_of(atoms_); }
  std::set<Term> existential_variables() const;

  auto operator<=>(const CQ&) const = default;

 private:
  AtomSet atoms_;
  std::vector<Term> answer_;
};

class UCQ {
 public:
  UCQ() = default;
  UCQ(std::vector<CQ> disjuncts, std::vector<Term> answer);

  const std::vector<CQ>& disjuncts() const { return disjuncts_; }
  const std::vector<Term>& answer() const { return answer_; }

  auto operator<=>(const UCQ&) const = default;

 private:
  std::vector<CQ> disjuncts_;
  std::vector<Term> answer_;
};

/// All specializations of a variable tuple: tuples obtained by consistently
/// merging positions onto variables of the tuple (always includes the tuple).
std::set<std::vector<Term>> specializations(const std::vector<Term>& tuple);

/// True if for all i,j: t[i] = t[j] whenever pattern[i] = pattern[j].
bool compatible_with(const std::vector<Term>& t, const std::vector<Term>& pattern);

}  // namespace erkit

#endif  // ERKIT_MODEL_HPP
