#include "mmd/leafset.hpp"

#include "mmd/errors.hpp"

#include <algorithm>

namespace mmd {

LeafSet LeafSet::whole() { return LeafSet{}; }

LeafSet LeafSet::cylinders(const ShiftSystem& sys, int depth, std::vector<Word> words) {
  if (depth < 0) fail(ErrorKind::Validation, "negative leaf depth");
  for (const Word& w : words) {
    if (static_cast<int>(w.size()) != depth) fail(ErrorKind::Validation, "leaf word has the wrong depth");
    sys.require_admissible(w);
  }
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  LeafSet z;
  z.kind_ = Kind::Cylinders;
  z.depth_ = depth;
  z.words_ = std::move(words);
  return z;
}

LeafSet LeafSet::points(const ShiftSystem& sys, std::vector<PointRep> pts) {
  for (const auto& p : pts) require_admissible(p, sys);
  LeafSet z;
  z.kind_ = Kind::Points;
  z.points_ = std::move(pts);
  return z;
}

bool LeafSet::empty() const {
  switch (kind_) {
    case Kind::Whole: return false;
    case Kind::Cylinders: return words_.empty();
    case Kind::Points: return points_.empty();
  }
  return true;
}

std::vector<Word> LeafSet::prefixes(const ShiftSystem& sys, int length, std::uint64_t cap) const {
  std::vector<Word> out;
  switch (kind_) {
    case Kind::Whole:
      return enumerate_words(sys, length, cap);
    case Kind::Points:
      for (const auto& p : points_) out.push_back(p.window(0, length));
      break;
    case Kind::Cylinders:
      if (length <= depth_) {
        for (const auto& w : words_) out.emplace_back(w.begin(), w.begin() + length);
      } else {
        const int extra = length - depth_;
        const auto tails = enumerate_words(sys, extra, cap);
        for (const auto& w : words_) {
          for (const auto& t : tails) {
            if (!w.empty() && !sys.allowed(w.back(), t.front())) continue;
            if (out.size() >= cap) fail(ErrorKind::Resource, "enumeration cap " + std::to_string(cap) + " exceeded");
            Word v = w;
            v.insert(v.end(), t.begin(), t.end());
            out.push_back(std::move(v));
          }
        }
      }
      break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::uint64_t LeafSet::count_prefixes(const ShiftSystem& sys, int length) const {
  if (kind_ == Kind::Whole) return sys.count_words(length);
  if (kind_ == Kind::Cylinders && length > depth_) {
    if (depth_ == 0) return words_.empty() ? 0 : sys.count_words(length);
    std::uint64_t total = 0;
    for (const auto& w : words_) total += sys.count_extensions(w.back(), length - depth_);
    return total;
  }
  return prefixes(sys, length).size();
}

}  // namespace mmd
