#ifndef ERKIT_SURGERY_HPP
#define ERKIT_SURGERY_HPP

#include <optional>
#include <utility>

#include "erkit/chase.hpp"
#include "erkit/model.hpp"
#include "erkit/rewrite.hpp"

/// Rule-set transformations: database encoding, reification to a binary
/// signature, streamlining into three-phase rules, body rewriting, and the
/// composite `regalize` pipeline with its property checkers.
namespace erkit {

class RewritingBudgetExceeded : public Error {
 public:
  explicit RewritingBudgetExceeded(const std::string& rule_id)
      : Error("body rewriting exceeded its budget on rule " + rule_id), rule_id_(rule_id) {}
  const std::string& rule_id() const { return rule_id_; }

 private:
  std::string rule_id_;
};

/// Named depth-bounded hom-equivalence check attached to a transformation.
struct Obligation {
  std::string name;
  bool holds = false;
  std::string detail;
};

struct SurgeryReport {
  Signature input_signature;
  Signature output_signature;
  std::set<std::string> fresh_predicates;
  std::vector<Obligation> obligations;

  bool all_hold() const {
    for (const auto& o : obligations)
      if (!o.holds) return false;
    return true;
  }
};

/// The rule ⊤ → ∃v̄ f(J) for a bijective renaming f of J's terms to fresh
/// existential variables. Throws when J is {⊤} only.
Rule encode_db(const Instance& db);

/// Replaces every atom A(x₁..xₙ) of arity n > 2 with {A_i(x_i, w) | 1 ≤ i ≤ n}
/// for a fresh per-atom identifier w; identity on arities ≤ 2.
Instance reify(const Instance& db);
Rule reify(const Rule& rule);
RuleSet reify(const RuleSet& rules);
CQ reify(const CQ& q);

/// Splits each non-Datalog rule over an at-most-binary signature into
/// ρ_init / ρ_∃ / ρ_DL with fresh per-rule predicates; Datalog rules pass
/// through unchanged.
RuleSet streamline(const RuleSet& rules);

/// For each rule, rewrites its body (frontier variables as answers) against
/// the whole set and adds one rule per disjunct, reusing the original head.
/// Throws RewritingBudgetExceeded when some body rewriting diverges.
RuleSet body_rewrite(const RuleSet& rules, RewriteBudget budget = {});

/// Every binary head atom of a non-Datalog rule goes frontier → existential.
bool check_forward_existential(const RuleSet& rules);

/// No predicate occurs twice in a non-Datalog rule head.
bool check_predicate_unique(const RuleSet& rules);

struct QuickCheck {
  bool quick = true;
  std::optional<Atom> counterexample;
  std::optional<Instance> instance;
};

/// Every chase atom whose terms all lie in the input's active domain must be
/// derivable within one step; checked per supplied instance up to `depth`.
QuickCheck check_quick_empirical(const RuleSet& rules, const std::vector<Instance>& instances,
                                 int depth, std::size_t max_atoms = 100000);

/// Partition into (Datalog rules, existential rules).
std::pair<RuleSet, RuleSet> split_datalog(const RuleSet& rules);

// Depth-bounded hom-equivalence obligations, each checkable in isolation.

/// chase(J ⊎ J′, S, k) ≡hom chase(J, S ∪ {⊤→J′}, k+1).
Obligation encode_obligation(const Instance& j, const Instance& j_prime, const RuleSet& rules,
                             int k, std::size_t max_atoms = 100000);

/// chase(reify(J), reify(S), k) ≡hom reify(chase(J, S, k)) at equal depth.
Obligation reify_obligation(const Instance& j, const RuleSet& rules, int k,
                            std::size_t max_atoms = 100000);

/// chase(J, S, i)|_Σ ≡hom chase(J, streamline(S), 3i)|_Σ over S's signature.
Obligation streamline_obligation(const Instance& j, const RuleSet& rules, int i,
                                 std::size_t max_atoms = 100000);

/// chase(J, S, k) ≡hom chase(J, body_rewrite(S), k) at matched depth.
Obligation body_rewrite_obligation(const Instance& j, const RuleSet& rules, int k,
                                   RewriteBudget budget = {}, std::size_t max_atoms = 100000);

struct RegalizeOptions {
  RewriteBudget budget;
  bool check_obligations = true;
  int obligation_depth = 3;
  std::size_t max_atoms = 100000;
};

/// body_rewrite(streamline(reify(R ∪ {encode_db(I)}))) plus a report of the
/// per-stage obligations and the syntactic property flags.
std::pair<RuleSet, SurgeryReport> regalize(const Instance& db, const RuleSet& rules,
                                           const RegalizeOptions& options = {});

}  // namespace erkit

#endif  // ERKIT_SURGERY_HPP
