#ifndef ERKIT_ANALYSIS_HPP
#define ERKIT_ANALYSIS_HPP

#include <optional>

#include "erkit/chase.hpp"
#include "erkit/model.hpp"
#include "erkit/multiset.hpp"
#include "erkit/rewrite.hpp"
#include "erkit/surgery.hpp"

/// Tournaments, loop detection, valley queries, witness sets, peak removal
/// and the end-to-end pipeline verifier.
namespace erkit {

/// An (inclusive) tournament: between any two distinct vertices at least one
/// direction of the predicate is present in the host instance.

/// Exact search for a k-vertex tournament over `pred` edges; deterministic
/// (lexicographically least witness).
std::optional<std::vector<Term>> find_tournament(const Instance& db, int k,
                                                 const std::string& pred = "E");

/// A maximum-size tournament with at most `cap` vertices.
std::vector<Term> max_tournament(const Instance& db, int cap, const std::string& pred = "E");

/// Some term t with pred(t,t) in the instance.
std::optional<Term> has_loop(const Instance& db, const std::string& pred = "E");

/// Binary CQ whose atom digraph is acyclic and whose maximal variables all
/// lie among the two answer variables.
bool is_valley_query(const CQ& q);

struct Witness {
  std::size_t disjunct_index = 0;
  CQ disjunct;
  Subst hom;  // injective, total on the disjunct's terms
  Term s, t;

  auto operator<=>(const Witness&) const = default;
};

/// All (disjunct, injective hom) pairs of an injectivized UCQ sending the
/// disjunct's answer pair onto (s, t) in `prefix`.
std::vector<Witness> find_witnesses(const Term& s, const Term& t, const UCQ& q_inj,
                                    const Instance& prefix);

/// Timestamp multiset of the witness image.
NatMultiset witness_timestamps(const Witness& w, const ChaseTrace& trace);

/// One step of the peak-removing argument: drop the atoms around the least
/// maximal existential variable, splice in the body image of the trigger
/// that created its peak, and re-witness over the resulting sub-instance.
/// The result's timestamp multiset is strictly smaller; a failure of that
/// guarantee raises SoundnessError.
Witness peak_removal_step(const Witness& w, const ChaseTrace& trace, const UCQ& q_inj,
                          const RuleSet& existential_rules);

struct ValleyWitness {
  Witness witness;
  int steps = 0;                     // peak removals performed
  std::vector<NatMultiset> descent;  // strictly decreasing timestamp chain
};

/// Iterates peak removal from a timestamp-minimal witness until the disjunct
/// is a valley query.
ValleyWitness valley_witness(const Term& s, const Term& t, const UCQ& q_inj,
                             const ChaseTrace& trace, const RuleSet& existential_rules);

/// Exact search for a size-s sub-tournament all of whose pairs carry some
/// common color; `color` maps present directed edges to colors.
std::optional<std::pair<std::vector<Term>, int>> monochromatic_subtournament(
    const std::vector<Term>& vertices, const std::map<std::pair<Term, Term>, int>& color, int s);

struct PathFunctionCheck {
  bool functional = true;
  std::optional<Term> source;  // witness of a violation: one source,
  std::vector<std::vector<Term>> images;  // two distinct image tuples
};

/// For q(x, ȳ) with every y below x, checks that the entailed relation
/// {(s, t̄)} is a function of s over the prefix.
PathFunctionCheck path_function_check(const CQ& q, const Instance& prefix);

/// Outcome of the single-valley-query tournament analysis.
struct ValleyTournamentAnalysis {
  enum class Shape { Disconnected, SingleMaximal, TwoMaximal };
  Shape shape = Shape::TwoMaximal;
  std::vector<std::pair<Term, Term>> edges;          // pairs with prefix |= q(u,v)
  std::optional<std::vector<Term>> tournament;       // size-k tournament on those edges
  std::optional<Term> loop_at;                       // u with prefix |= q(u,u)
};

/// If the valley query defines a size-k tournament among prefix terms,
/// derives a loop q(u,u) through the applicable proof case (disconnected
/// merge, out-degree bound, or function composition). A defined tournament
/// without a derivable loop raises SoundnessError.
ValleyTournamentAnalysis analyze_valley_tournament(const CQ& q, const Instance& prefix,
                                                   int k = 4);

enum class PawnVerdict { LoopEntailed, NoLargeTournamentAtDepth, TheoremMachineryConfirmed,
                         Inconclusive };

struct PawnStage {
  std::string name;
  bool ok = true;
  std::string detail;
};

struct PawnReport {
  PawnVerdict verdict = PawnVerdict::Inconclusive;
  std::string reason;
  std::vector<PawnStage> stages;
};

struct PawnOptions {
  int depth = 4;
  int k_target = 4;
  RewriteBudget budget;
  std::size_t max_atoms = 100000;
  bool check_obligations = false;  // the full surgery obligations are slow
};

/// End-to-end verifier: regalize, split, chase the existential part, saturate
/// with the Datalog part, then look for loops and tournaments and run the
/// valley-witness machinery.
PawnReport verify_pawn(const Instance& db, const RuleSet& rules, const PawnOptions& options = {});

std::string to_text(PawnVerdict v);

}  // namespace erkit

#endif  // ERKIT_ANALYSIS_HPP
