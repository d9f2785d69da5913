#ifndef ERKIT_CHASE_HPP
#define ERKIT_CHASE_HPP

#include <optional>

#include "erkit/hom.hpp"
#include "erkit/model.hpp"

/// Depth-bounded oblivious chase with full trigger provenance.
namespace erkit {

/// A rule paired with a homomorphism of its body into the current instance.
/// Identity is (rule id, body map restricted to body variables).
struct Trigger {
  std::string rule_id;
  Subst body_map;

  auto operator<=>(const Trigger&) const = default;
};

/// Provenance of a labelled null: the step at which it was created, the
/// trigger that created it, and the image of its rule's frontier.
struct NullMeta {
  int timestamp = 0;
  Trigger trigger;
  std::set<Term> frontier;
};

enum class ChaseStatus {
  Completed,       // ran the requested number of steps
  Saturated,       // reached a fixpoint before the depth bound
  BudgetExceeded,  // atom cap hit; the trace is a valid prefix
};

class ChaseTrace {
 public:
  ChaseTrace() = default;
  ChaseTrace(std::vector<Instance> steps, std::map<Term, NullMeta> null_meta, ChaseStatus status)
      : steps_(std::move(steps)), null_meta_(std::move(null_meta)), status_(status) {
    if (steps_.empty()) throw Error("chase trace without a step 0");
  }

  const std::vector<Instance>& steps() const { return steps_; }
  const Instance& result() const { return steps_.back(); }
  const std::map<Term, NullMeta>& null_meta() const { return null_meta_; }
  ChaseStatus status() const { return status_; }

  /// First step whose active domain contains the term; input terms are at 0.
  int timestamp(const Term& t) const;
  bool knows(const Term& t) const;

 private:
  std::vector<Instance> steps_;
  std::map<Term, NullMeta> null_meta_;
  ChaseStatus status_ = ChaseStatus::Completed;
};

/// All triggers of R on I, complete and deduplicated, in canonical order
/// (rule id, then body map).
std::vector<Trigger> triggers(const Instance& db, const RuleSet& rules);

/// Head image under the body map, with fresh nulls `_n<k>` for existentials
/// drawn from `null_counter` in the order of the rule's existential variables.
AtomSet trigger_output(const Rule& rule, const Subst& body_map, int& null_counter,
                       Subst* out_extension = nullptr);

/// Steps 0..depth of the oblivious chase: each trigger fires exactly once,
/// at the first step where it exists.
ChaseTrace chase(const Instance& db, const RuleSet& rules, int depth,
                 std::size_t max_atoms = 100000);

/// Chase with the given rules until no new atom appears (or the caps hit).
/// Intended for Datalog saturation; existential rules are accepted but may
/// hit the caps instead of a fixpoint.
ChaseTrace saturate(const Instance& db, const RuleSet& rules, std::size_t max_atoms = 100000,
                    int max_steps = 64);

/// Reachability along directed binary atoms. Throws on arity > 2.
class ChaseOrder {
 public:
  explicit ChaseOrder(const Instance& db);

  bool reaches(const Term& s, const Term& t) const;  // strict: a real path
  bool reaches_eq(const Term& s, const Term& t) const { return s == t || reaches(s, t); }

 private:
  std::map<Term, std::set<Term>> reach_;
};

/// No directed cycle over binary atoms (a loop atom is a cycle).
bool is_dag(const Instance& db);

}  // namespace erkit

#endif  // ERKIT_CHASE_HPP
