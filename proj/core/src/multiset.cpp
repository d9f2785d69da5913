#include "erkit/multiset.hpp"

#include <algorithm>

namespace erkit {

NatMultiset::NatMultiset(const std::vector<int>& values) {
  for (int v : values) insert(v);
}

void NatMultiset::insert(int value) {
  if (value < 0) throw Error("multiset over naturals: negative value");
  ++counts_[value];
  ++size_;
}

void NatMultiset::erase_one(int value) {
  auto it = counts_.find(value);
  if (it == counts_.end()) throw Error("erase from multiset: value not present");
  if (--it->second == 0) counts_.erase(it);
  --size_;
}

int NatMultiset::max() const {
  if (empty()) throw Error("max of the empty multiset");
  return counts_.rbegin()->first;
}

std::vector<int> NatMultiset::sorted_desc() const {
  std::vector<int> out;
  out.reserve(size_);
  for (auto it = counts_.rbegin(); it != counts_.rend(); ++it)
    out.insert(out.end(), it->second, it->first);
  return out;
}

std::strong_ordering mlex_compare(const NatMultiset& m, const NatMultiset& n) {
  std::vector<int> a = m.sorted_desc(), b = n.sorted_desc();
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
    if (a[i] != b[i]) return a[i] <=> b[i];
  return a.size() <=> b.size();
}

NatMultiset timestamps_of(const std::set<Term>& terms, const ChaseTrace& trace) {
  NatMultiset out;
  for (const auto& t : terms) out.insert(trace.timestamp(t));
  return out;
}

std::string to_text(const NatMultiset& m) {
  std::string out = "{";
  bool first = true;
  for (int v : m.sorted_desc()) {
    if (!first) out += ",";
    first = false;
    out += std::to_string(v);
  }
  return out + "}";
}

}  // namespace erkit
