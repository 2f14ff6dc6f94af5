#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace relfix {

/// Hard cap on carrier size for the exact relation algebra.
inline constexpr int kMaxPoints = 16;

/// Thrown on precondition violations (bad indices, carrier mismatches,
/// malformed parameters). Domain verdicts are never exceptions; they are
/// returned as Witness values.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Subset of carrier points, bit i <=> point i. Carriers are capped at
/// kMaxPoints so 32 bits always suffice.
using IndexSet = std::uint32_t;

inline bool set_contains(IndexSet s, int i) { return (s >> i) & 1u; }
inline IndexSet set_with(IndexSet s, int i) { return s | (IndexSet{1} << i); }
inline int set_size(IndexSet s) { return std::popcount(s); }
inline IndexSet full_set(int n) { return (n >= 32) ? ~IndexSet{0} : ((IndexSet{1} << n) - 1); }

std::vector<int> set_to_indices(IndexSet s);
IndexSet set_from_indices(const std::vector<int>& indices, int n);

/// The finite point set X: a size and distinct human-readable labels.
class Carrier {
 public:
  explicit Carrier(std::vector<std::string> labels);

  /// Carrier with labels p0, p1, ..., p{n-1}.
  static Carrier numbered(int n);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int i) const;
  int index_of(std::string_view label) const;  // throws Error if unknown

  bool operator==(const Carrier&) const = default;

 private:
  std::vector<std::string> labels_;
};

/// Boolean verdict plus the evidence for a negative answer. A false verdict
/// always carries a counterexample that replays against the definition being
/// checked; witnesses are minimal in lexicographic index order. For the
/// locally-transitive notions the offending sequence range is reported in
/// `subset`. `note` carries justification tags for verdicts that hold for
/// structural reasons (e.g. "finite-discrete").
struct Witness {
  bool holds = true;
  std::vector<int> counterexample;
  std::vector<int> subset;
  std::string note;

  static Witness pass(std::string note = "") { return {true, {}, {}, std::move(note)}; }
  static Witness fail(std::vector<int> counterexample, std::string note = "") {
    return {false, std::move(counterexample), {}, std::move(note)};
  }
  static Witness fail_on_subset(std::vector<int> subset, std::vector<int> counterexample,
                                std::string note = "") {
    return {false, std::move(counterexample), std::move(subset), std::move(note)};
  }

  explicit operator bool() const { return holds; }
};

}  // namespace relfix
