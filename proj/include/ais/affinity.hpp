#pragma once

// Matching and affinity kernels shared by every algorithm family:
// complementary alignment scoring for idiotypic networks, r-contiguous
// matching for detectors, and distances for real-valued patterns.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ais {

class Rng;

/// Fixed-length binary string. Length is at least 1.
class BitPattern {
 public:
  BitPattern() = default;
  explicit BitPattern(std::vector<std::uint8_t> bits);
  BitPattern(std::initializer_list<int> bits);

  /// Parses a string of '0'/'1' characters.
  static BitPattern parse(std::string_view text);
  static BitPattern random(std::size_t length, Rng& rng);

  std::size_t size() const { return bits_.size(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  void flip(std::size_t i) { bits_[i] ^= 1U; }

  BitPattern complement() const;
  std::string str() const;

  const std::vector<std::uint8_t>& bits() const { return bits_; }

  friend bool operator==(const BitPattern&, const BitPattern&) = default;
  friend auto operator<=>(const BitPattern&, const BitPattern&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Real-valued pattern of dimension d >= 1.
class FeatureVector {
 public:
  FeatureVector() = default;
  explicit FeatureVector(std::vector<double> values) : values_(std::move(values)) {}
  FeatureVector(std::initializer_list<double> values) : values_(values) {}

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  const std::vector<double>& values() const { return values_; }
  bool all_finite() const;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

 private:
  std::vector<double> values_;
};

enum class Representation { Bits, Real };

/// All bit strings of a fixed length.
struct BitSpace {
  std::size_t length = 8;
};

using Pattern = std::variant<BitPattern, FeatureVector>;

Representation representation_of(const Pattern& p);
std::string to_string(Representation r);

enum class AlignmentMode {
  FullOverlapOnly,
  AllShiftedOverlaps,
};

/// Threshold s and the set of alignments that contribute to a total reaction.
///
/// Under AllShiftedOverlaps every shift whose overlap is at least
/// `min_overlap` bits counts (0 means "use s"); overlaps shorter than s can
/// never reach the threshold, so lowering min_overlap below s only changes q.
struct MatchConfig {
  int threshold = 1;
  AlignmentMode mode = AlignmentMode::AllShiftedOverlaps;
  int min_overlap = 0;

  int effective_min_overlap() const { return min_overlap > 0 ? min_overlap : threshold; }
  void validate(std::size_t length) const;
};

/// Number of complementary (0,1)/(1,0) pairs when p[i] sits against e[i + offset].
int complementary_pairs(const BitPattern& p, const BitPattern& e, int offset);

/// Alignments permitted for two strings of `length` bits; the size is q.
std::vector<int> alignment_offsets(std::size_t length, const MatchConfig& cfg);

/// Reaction strength G for one alignment: 0 below s, otherwise 1 + (matches - s).
int xor_alignment_score(const BitPattern& p, const BitPattern& e, int offset,
                        const MatchConfig& cfg);

/// Sum of G over all permitted alignments (the match specificity m).
int total_reaction(const BitPattern& p, const BitPattern& e, const MatchConfig& cfg);

/// Length of the longest run of positions where a and b agree.
std::size_t longest_agreeing_run(const BitPattern& a, const BitPattern& b);

/// True iff a and b agree in at least r consecutive positions.
bool r_contiguous_match(const BitPattern& a, const BitPattern& b, int r);

std::size_t hamming_distance(const BitPattern& a, const BitPattern& b);

double euclidean_distance(const FeatureVector& u, const FeatureVector& v);

/// Bounded, monotone decreasing map from distance to affinity: 1 / (1 + d).
inline double affinity_from_distance(double d) { return 1.0 / (1.0 + d); }

/// Euclidean distance for real patterns, Hamming distance for bit patterns.
double pattern_distance(const Pattern& a, const Pattern& b);

std::string pattern_to_string(const Pattern& p);

}  // namespace ais
