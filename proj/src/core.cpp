#include "relfix/core.hpp"

#include <unordered_set>

namespace relfix {

std::vector<int> set_to_indices(IndexSet s) {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i)
    if (set_contains(s, i)) out.push_back(i);
  return out;
}

IndexSet set_from_indices(const std::vector<int>& indices, int n) {
  IndexSet s = 0;
  for (int i : indices) {
    if (i < 0 || i >= n) throw Error("point index " + std::to_string(i) + " out of range");
    s = set_with(s, i);
  }
  return s;
}

Carrier::Carrier(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw Error("carrier must contain at least one point");
  if (static_cast<int>(labels_.size()) > kMaxPoints)
    throw Error("carrier exceeds the supported maximum of " + std::to_string(kMaxPoints) +
                " points");
  std::unordered_set<std::string_view> seen;
  for (const auto& l : labels_)
    if (!seen.insert(l).second) throw Error("duplicate point label '" + l + "'");
}

Carrier Carrier::numbered(int n) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
  return Carrier(std::move(labels));
}

const std::string& Carrier::label(int i) const {
  if (i < 0 || i >= size()) throw Error("point index " + std::to_string(i) + " out of range");
  return labels_[static_cast<std::size_t>(i)];
}

int Carrier::index_of(std::string_view label) const {
  for (int i = 0; i < size(); ++i)
    if (labels_[static_cast<std::size_t>(i)] == label) return i;
  throw Error("unknown point label '" + std::string(label) + "'");
}

}  // namespace relfix
