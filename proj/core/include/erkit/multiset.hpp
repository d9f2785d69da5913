#ifndef ERKIT_MULTISET_HPP
#define ERKIT_MULTISET_HPP

#include <compare>
#include <map>
#include <vector>

#include "erkit/chase.hpp"
#include "erkit/model.hpp"

namespace erkit {

/// A finite multiset over the naturals with the strict lexicographic order:
/// the empty multiset is minimal; otherwise compare maxima, then recurse on
/// both sides minus one copy of their maxima.
class NatMultiset {
 public:
  NatMultiset() = default;
  explicit NatMultiset(const std::vector<int>& values);

  void insert(int value);
  void erase_one(int value);
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  const std::map<int, std::size_t>& counts() const { return counts_; }
  int max() const;  // throws on the empty multiset

  /// Descending value list; lexicographic comparison of these lists (with
  /// proper-prefix below) realizes the recursive definition.
  std::vector<int> sorted_desc() const;

  auto operator<=>(const NatMultiset&) const = default;

 private:
  std::map<int, std::size_t> counts_;
  std::size_t size_ = 0;
};

std::strong_ordering mlex_compare(const NatMultiset& m, const NatMultiset& n);

inline bool mlex_less(const NatMultiset& m, const NatMultiset& n) {
  return mlex_compare(m, n) == std::strong_ordering::less;
}

/// Multiset of first-appearance steps of the given terms in a chase trace.
NatMultiset timestamps_of(const std::set<Term>& terms, const ChaseTrace& trace);

std::string to_text(const NatMultiset& m);

}  // namespace erkit

#endif  // ERKIT_MULTISET_HPP
