#pragma once
// Subsets Z of X realised as unions of equal-depth cylinders.

#include "mmd/symbolic.hpp"

#include <vector>

namespace mmd {

class LeafSet {
 public:
  enum class Kind { Whole, Cylinders, Points };

  static LeafSet whole();
  /// Union of the given depth-L cylinders (sorted and deduplicated).
  static LeafSet cylinders(const ShiftSystem& sys, int depth, std::vector<Word> words);
  static LeafSet points(const ShiftSystem& sys, std::vector<PointRep> pts);

  Kind kind() const { return kind_; }
  int depth() const { return depth_; }
  const std::vector<Word>& words() const { return words_; }
  const std::vector<PointRep>& point_list() const { return points_; }
  bool empty() const;

  /// Distinct length-L prefixes of the points of Z (one-sided). Whole space
  /// enumerates every admissible word.
  std::vector<Word> prefixes(const ShiftSystem& sys, int length, std::uint64_t cap = kDefaultEnumerationCap) const;
  /// Number of distinct length-L prefixes without materialising them.
  std::uint64_t count_prefixes(const ShiftSystem& sys, int length) const;

 private:
  Kind kind_ = Kind::Whole;
  int depth_ = 0;
  std::vector<Word> words_;
  std::vector<PointRep> points_;
};

}  // namespace mmd
