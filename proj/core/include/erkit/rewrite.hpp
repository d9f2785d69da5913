#ifndef ERKIT_REWRITE_HPP
#define ERKIT_REWRITE_HPP

#include <optional>

#include "erkit/chase.hpp"
#include "erkit/hom.hpp"
#include "erkit/model.hpp"

/// UCQ rewriting by piece-based backward chaining, injectivization of UCQs,
/// and an empirical probe for the least deciding chase depth.
namespace erkit {

struct RewriteBudget {
  int max_generations = 8;
  std::size_t max_cqs = 5000;
};

enum class RewriteStatus { Converged, BudgetExceeded };

struct RewritingRun {
  CQ input;
  std::vector<UCQ> generations;  // cumulative snapshots, index = generation
  RewriteStatus status = RewriteStatus::Converged;

  const UCQ& result() const { return generations.back(); }
};

/// One backward-chaining step of `q` against the head of `rho`: every valid
/// piece unifier yields the core of the rewritten query. An existential
/// variable of the rule may unify only with variables of `q` that are
/// existential in `q` and occur solely in the unified piece.
std::vector<CQ> rewrite_step(const CQ& q, const Rule& rho);

/// Breadth-first saturation of rewrite_step over all rules with subsumption
/// pruning (a new CQ is dropped when an existing one maps into it fixing the
/// answer variables).
RewritingRun ucq_rewrite(const CQ& q, const RuleSet& rules, RewriteBudget budget = {});

/// For every disjunct with variable tuple x̄ and every specialization ȳ of
/// x̄, includes q[x̄↦ȳ]; deduplicated up to variable renaming. Satisfies
/// I ⊨ Q(ā) iff some disjunct of the result maps injectively fixing ā.
UCQ injectivize(const UCQ& q);

/// Deterministic renaming of a CQ's variables (answer tuple first, then
/// first-occurrence order over the renamed atom list); used to deduplicate
/// disjuncts up to renaming.
CQ canonical_form(const CQ& q);

/// Least k <= kmax such that, on every supplied instance, entailment of `q`
/// at depth kmax implies entailment at depth k already. Empirical probe, not
/// a decision.
std::optional<int> least_deciding_depth(const CQ& q, const RuleSet& rules,
                                        const std::vector<Instance>& instances, int kmax,
                                        std::size_t max_atoms = 100000);

}  // namespace erkit

#endif  // ERKIT_REWRITE_HPP
