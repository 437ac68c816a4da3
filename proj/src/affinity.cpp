#include "ais/affinity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "ais/rng.hpp"

namespace ais {
namespace {

void require_same_length(const BitPattern& a, const BitPattern& b, const char* what) {
  if (a.size() == 0 || b.size() == 0) {
    throw std::invalid_argument(std::string(what) + ": empty bit pattern");
  }
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(what) + ": length mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  }
}

}  // namespace

BitPattern::BitPattern(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_) {
    if (b > 1) throw std::invalid_argument("BitPattern: values must be 0 or 1");
  }
}

BitPattern::BitPattern(std::initializer_list<int> bits) {
  bits_.reserve(bits.size());
  for (int b : bits) {
    if (b != 0 && b != 1) throw std::invalid_argument("BitPattern: values must be 0 or 1");
    bits_.push_back(static_cast<std::uint8_t>(b));
  }
}

BitPattern BitPattern::parse(std::string_view text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("BitPattern: invalid character '" + std::string(1, c) + "'");
    }
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  if (bits.empty()) throw std::invalid_argument("BitPattern: empty string");
  return BitPattern(std::move(bits));
}

BitPattern BitPattern::random(std::size_t length, Rng& rng) {
  std::vector<std::uint8_t> bits(length);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_u64() >> 63);
  return BitPattern(std::move(bits));
}

BitPattern BitPattern::complement() const {
  BitPattern out = *this;
  for (auto& b : out.bits_) b ^= 1U;
  return out;
}

std::string BitPattern::str() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
  return s;
}

bool FeatureVector::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Representation representation_of(const Pattern& p) {
  return std::holds_alternative<BitPattern>(p) ? Representation::Bits : Representation::Real;
}

std::string to_string(Representation r) { return r == Representation::Bits ? "bits" : "real"; }

void MatchConfig::validate(std::size_t length) const {
  const auto l = static_cast<int>(length);
  if (threshold < 1 || threshold > l) {
    throw std::invalid_argument("MatchConfig: threshold s must lie in [1, " +
                                std::to_string(l) + "], got " + std::to_string(threshold));
  }
  if (min_overlap < 0 || min_overlap > l) {
    throw std::invalid_argument("MatchConfig: min_overlap out of range");
  }
}

int complementary_pairs(const BitPattern& p, const BitPattern& e, int offset) {
  const int lp = static_cast<int>(p.size());
  const int le = static_cast<int>(e.size());
  const int begin = std::max(0, -offset);
  const int end = std::min(lp, le - offset);
  int matches = 0;
  for (int i = begin; i < end; ++i) {
    matches += (p[static_cast<std::size_t>(i)] ^ e[static_cast<std::size_t>(i + offset)]);
  }
  return matches;
}

std::vector<int> alignment_offsets(std::size_t length, const MatchConfig& cfg) {
  cfg.validate(length);
  if (cfg.mode == AlignmentMode::FullOverlapOnly) return {0};
  const int max_shift = static_cast<int>(length) - cfg.effective_min_overlap();
  std::vector<int> offsets;
  offsets.reserve(static_cast<std::size_t>(2 * max_shift + 1));
  for (int k = -max_shift; k <= max_shift; ++k) offsets.push_back(k);
  return offsets;
}

int xor_alignment_score(const BitPattern& p, const BitPattern& e, int offset,
                        const MatchConfig& cfg) {
  require_same_length(p, e, "xor_alignment_score");
  cfg.validate(p.size());
  const int max_shift = cfg.mode == AlignmentMode::FullOverlapOnly
                            ? 0
                            : static_cast<int>(p.size()) - cfg.effective_min_overlap();
  if (std::abs(offset) > max_shift) {
    throw std::out_of_range("xor_alignment_score: offset " + std::to_string(offset) +
                            " not permitted (max shift " + std::to_string(max_shift) + ")");
  }
  const int matches = complementary_pairs(p, e, offset);
  if (matches < cfg.threshold) return 0;
  return 1 + (matches - cfg.threshold);
}

int total_reaction(const BitPattern& p, const BitPattern& e, const MatchConfig& cfg) {
  require_same_length(p, e, "total_reaction");
  int m = 0;
  for (int offset : alignment_offsets(p.size(), cfg)) {
    const int matches = complementary_pairs(p, e, offset);
    if (matches >= cfg.threshold) m += 1 + (matches - cfg.threshold);
  }
  return m;
}

std::size_t longest_agreeing_run(const BitPattern& a, const BitPattern& b) {
  require_same_length(a, b, "longest_agreeing_run");
  std::size_t best = 0;
  std::size_t run = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    run = (a[i] == b[i]) ? run + 1 : 0;
    best = std::max(best, run);
  }
  return best;
}

bool r_contiguous_match(const BitPattern& a, const BitPattern& b, int r) {
  require_same_length(a, b, "r_contiguous_match");
  if (r < 1 || r > static_cast<int>(a.size())) {
    throw std::invalid_argument("r_contiguous_match: r must lie in [1, " +
                                std::to_string(a.size()) + "]");
  }
  return longest_agreeing_run(a, b) >= static_cast<std::size_t>(r);
}

std::size_t hamming_distance(const BitPattern& a, const BitPattern& b) {
  require_same_length(a, b, "hamming_distance");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
  return d;
}

double euclidean_distance(const FeatureVector& u, const FeatureVector& v) {
  if (u.size() != v.size()) {
    throw std::invalid_argument("euclidean_distance: dimension mismatch (" +
                                std::to_string(u.size()) + " vs " + std::to_string(v.size()) +
                                ")");
  }
  if (!u.all_finite() || !v.all_finite()) {
    throw std::domain_error("euclidean_distance: non-finite component");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double diff = u[i] - v[i];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

double pattern_distance(const Pattern& a, const Pattern& b) {
  if (a.index() != b.index()) {
    throw std::invalid_argument("pattern_distance: representation mismatch");
  }
  if (const auto* bits = std::get_if<BitPattern>(&a)) {
    return static_cast<double>(hamming_distance(*bits, std::get<BitPattern>(b)));
  }
  return euclidean_distance(std::get<FeatureVector>(a), std::get<FeatureVector>(b));
}

std::string pattern_to_string(const Pattern& p) {
  if (const auto* bits = std::get_if<BitPattern>(&p)) return bits->str();
  std::ostringstream out;
  const auto& v = std::get<FeatureVector>(p);
  out.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << ' ';
    out << v[i];
  }
  return out.str();
}

}  // namespace ais
