#include "erkit/hom.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace erkit {

namespace {

struct SearchState {
  std::vector<Atom> src;                          // canonical order
  std::map<Predicate, std::vector<Atom>> by_pred; // candidates in dst
  bool injective = false;
  Subst mapping;
  std::multiset<Term> used;  // images of already-bound source terms
  std::vector<bool> matched;
  const std::function<bool(const Subst&)>* visit = nullptr;
  bool stopped = false;

  int bound_count(const Atom& a) const {
    int n = 0;
    for (const auto& t : a.args)
      if (t.kind == TermKind::Constant || mapping.count(t)) ++n;
    return n;
  }

  // Most already-bound arguments first; lexicographic atom order on ties.
  int pick_atom() const {
    int best = -1, best_n = -1;
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (matched[i]) continue;
      int n = bound_count(src[i]);
      if (n > best_n) { best = static_cast<int>(i); best_n = n; }
    }
    return best;
  }

  bool bind(const Term& s, const Term& t, std::vector<Term>& trail) {
    if (s.kind == TermKind::Constant) return s == t;
    auto it = mapping.find(s);
    if (it != mapping.end()) return it->second == t;
    if (injective && used.count(t)) return false;
    mapping[s] = t;
    used.insert(t);
    trail.push_back(s);
    return true;
  }

  void unbind(const std::vector<Term>& trail) {
    for (const auto& s : trail) {
      used.erase(used.find(mapping.at(s)));
      mapping.erase(s);
    }
  }

  void run() {
    if (stopped) return;
    int i = pick_atom();
    if (i < 0) {
      if (!(*visit)(mapping)) stopped = true;
      return;
    }
    auto cand = by_pred.find(src[i].pred);
    if (cand == by_pred.end()) return;
    matched[i] = true;
    for (const Atom& target : cand->second) {
      std::vector<Term> trail;
      bool ok = true;
      for (std::size_t k = 0; k < src[i].args.size() && ok; ++k)
        ok = bind(src[i].args[k], target.args[k], trail);
      if (ok) run();
      unbind(trail);
      if (stopped) break;
    }
    matched[i] = false;
  }
};

}  // namespace

void for_each_hom(const AtomSet& src, const AtomSet& dst, const Subst& seed, bool injective,
                  const std::function<bool(const Subst&)>& visit) {
  SearchState st;
  st.src.assign(src.begin(), src.end());
  st.injective = injective;
  st.matched.assign(st.src.size(), false);
  st.visit = &visit;
  for (const auto& a : dst) st.by_pred[a.pred].push_back(a);

  for (const auto& [s, t] : seed) {
    if (s.kind == TermKind::Constant) {
      if (s != t) return;  // inconsistent seed
      continue;
    }
    auto it = st.mapping.find(s);
    if (it != st.mapping.end()) {
      if (it->second != t) return;
      continue;
    }
    if (injective && st.used.count(t)) return;
    st.mapping[s] = t;
    st.used.insert(t);
  }
  st.run();
}

std::optional<Subst> find_hom(const AtomSet& src, const AtomSet& dst, const Subst& seed,
                              bool injective) {
  std::optional<Subst> out;
  for_each_hom(src, dst, seed, injective, [&](const Subst& h) {
    out = h;
    return false;
  });
  if (out) {
    for (const auto& t : terms_of(src))
      if (t.kind == TermKind::Constant) (*out)[t] = t;
  }
  return out;
}

std::vector<Subst> find_all_homs(const AtomSet& src, const AtomSet& dst, const Subst& seed,
                                 bool injective) {
  std::vector<Subst> out;
  std::set<Subst> seen;
  const auto consts = terms_of(src);
  for_each_hom(src, dst, seed, injective, [&](const Subst& h) {
    Subst full = h;
    for (const auto& t : consts)
      if (t.kind == TermKind::Constant) full[t] = t;
    if (seen.insert(full).second) out.push_back(std::move(full));
    return true;
  });
  return out;
}

bool hom_equivalent(const AtomSet& a, const AtomSet& b) {
  return find_hom(a, b).has_value() && find_hom(b, a).has_value();
}

std::optional<EntailmentWitness> entails(const Instance& db, const UCQ& q,
                                         const std::vector<Term>& t, bool injective) {
  if (t.size() != q.answer().size())
    throw Error("entails: tuple arity does not match the query");
  if (!compatible_with(t, q.answer())) return std::nullopt;
  for (std::size_t k = 0; k < q.disjuncts().size(); ++k) {
    const CQ& d = q.disjuncts()[k];
    Subst seed;
    bool consistent = true;
    for (std::size_t i = 0; i < t.size() && consistent; ++i) {
      auto [it, fresh] = seed.emplace(d.answer()[i], t[i]);
      consistent = fresh || it->second == t[i];
    }
    if (!consistent) continue;
    if (auto h = find_hom(d.atoms(), db.atoms(), seed, injective))
      return EntailmentWitness{k, *h};
  }
  return std::nullopt;
}

bool entails(const Instance& db, const CQ& q) {
  if (!q.answer().empty()) throw Error("Boolean entailment on a non-Boolean query");
  return find_hom(q.atoms(), db.atoms()).has_value();
}

CQ core(const CQ& q) {
  AtomSet atoms = q.atoms();
  Subst fix;
  for (const auto& v : q.answer()) fix[v] = v;

  bool changed = true;
  while (changed && atoms.size() > 1) {
    changed = false;
    for (const auto& victim : atoms) {
      AtomSet reduced = atoms;
      reduced.erase(victim);
      if (reduced.empty()) continue;
      if (auto h = find_hom(atoms, reduced, fix)) {
        atoms = apply_substitution(atoms, *h);
        changed = true;
        break;
      }
    }
  }
  return CQ{std::move(atoms), q.answer()};
}

namespace {

// Injective homs in both directions between equal-sized finite atom sets
// compose to bijections.
bool iso_with_seed(const AtomSet& a, const AtomSet& b, const Subst& sa, const Subst& sb) {
  if (a.size() != b.size()) return false;
  return find_hom(a, b, sa, /*injective=*/true).has_value() &&
         find_hom(b, a, sb, /*injective=*/true).has_value();
}

}  // namespace

bool isomorphic(const CQ& a, const CQ& b) {
  if (a.answer().size() != b.answer().size()) return false;
  Subst sa, sb;
  for (std::size_t i = 0; i < a.answer().size(); ++i) {
    auto [ia, fa] = sa.emplace(a.answer()[i], b.answer()[i]);
    auto [ib, fb] = sb.emplace(b.answer()[i], a.answer()[i]);
    if ((!fa && ia->second != b.answer()[i]) || (!fb && ib->second != a.answer()[i])) return false;
  }
  return iso_with_seed(a.atoms(), b.atoms(), sa, sb);
}

bool isomorphic(const Rule& a, const Rule& b) {
  // Tag body and head apart so one bijection must respect both.
  auto tagged = [](const Rule& r) {
    AtomSet out;
    for (const auto& at : r.body()) out.insert(Atom{Predicate{"\x01" "b:" + at.pred.name, at.pred.arity}, at.args});
    for (const auto& at : r.head()) out.insert(Atom{Predicate{"\x01" "h:" + at.pred.name, at.pred.arity}, at.args});
    return out;
  };
  return iso_with_seed(tagged(a), tagged(b), {}, {});
}

}  // namespace erkit
