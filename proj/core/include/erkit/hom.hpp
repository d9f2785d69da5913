#ifndef ERKIT_HOM_HPP
#define ERKIT_HOM_HPP

#include <functional>
#include <optional>
#include <utility>

#include "erkit/model.hpp"

/// Backtracking homomorphism search between finite atom sets.
///
/// A homomorphism maps variables and nulls to arbitrary terms and fixes
/// constants pointwise. The injective variant is injective among the mapped
/// terms: distinct variables/nulls get distinct images, while landing on a
/// constant is allowed. Search order is most-constrained-atom-first
/// with predicate indexing; ties break on lexicographic atom order, so
/// results are deterministic.
namespace erkit {

/// Returns a homomorphism from `src` into `dst` extending `seed`,
/// or nothing. The returned map is total on the terms of `src`
/// (constants included, mapped to themselves).
std::optional<Subst> find_hom(const AtomSet& src, const AtomSet& dst, const Subst& seed = {},
                              bool injective = false);

/// Enumerates every homomorphism (deterministic order). The visitor may
/// return false to stop early.
void for_each_hom(const AtomSet& src, const AtomSet& dst, const Subst& seed, bool injective,
                  const std::function<bool(const Subst&)>& visit);

std::vector<Subst> find_all_homs(const AtomSet& src, const AtomSet& dst, const Subst& seed = {},
                                 bool injective = false);

bool hom_equivalent(const AtomSet& a, const AtomSet& b);
inline bool hom_equivalent(const Instance& a, const Instance& b) {
  return hom_equivalent(a.atoms(), b.atoms());
}

struct EntailmentWitness {
  std::size_t disjunct_index;
  Subst hom;
};

/// First disjunct (in UCQ order) whose atoms map into `db` sending the
/// disjunct's answer tuple onto `t`; injective if requested.
std::optional<EntailmentWitness> entails(const Instance& db, const UCQ& q,
                                         const std::vector<Term>& t, bool injective = false);

/// Boolean-query shorthand.
bool entails(const Instance& db, const CQ& q);

/// Minimal retract of `q` that fixes the answer variables.
CQ core(const CQ& q);

/// Same atom structure up to a bijective variable renaming that matches the
/// answer tuples positionwise.
bool isomorphic(const CQ& a, const CQ& b);
bool isomorphic(const Rule& a, const Rule& b);

}  // namespace erkit

#endif  // ERKIT_HOM_HPP
