#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "patqubo/qubo.hpp"
#include "patqubo/sat.hpp"

namespace patqubo {

/// 4x4 upper-triangular clause QUBO over (a, b, c, y), stored row-major:
/// values[0..3] row a, [4..6] row b, [7..8] row c, [9] row y.
struct PatternQubo {
  static constexpr std::size_t kSize = 10;
  static constexpr std::size_t kDim = 4;

  std::array<Coefficient, kSize> values{};

  /// Row/column of values[k] in the 4x4 matrix.
  static constexpr std::array<std::pair<std::size_t, std::size_t>, kSize> kCells = {{
      {0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 1}, {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}}};

  QuboMatrix to_matrix() const;
  std::size_t nonzero_count() const;

  friend auto operator<=>(const PatternQubo&, const PatternQubo&) = default;
};

/// Integer interval [lo, hi] with lo <= 0 <= hi.
class ValueRange {
 public:
  ValueRange(Coefficient lo, Coefficient hi);

  /// Parses "lo:hi".
  static ValueRange parse(std::string_view text);

  Coefficient lo() const { return lo_; }
  Coefficient hi() const { return hi_; }
  std::uint64_t size() const { return static_cast<std::uint64_t>(hi_ - lo_ + 1); }
  bool contains(Coefficient v) const { return lo_ <= v && v <= hi_; }
  std::string to_string() const;

  friend bool operator==(const ValueRange&, const ValueRange&) = default;

 private:
  Coefficient lo_;
  Coefficient hi_;
};

/// Aux-minimized energies of the 8 clause-variable assignments and the
/// quantities derived from them.
struct PatternAnalysis {
  std::array<Energy, 7> sat_energies{};
  Energy unsat_energy = 0;
  bool uniform = false;
  bool valid = false;
  std::size_t sparsity = 0;
  Energy gap = 0;

  Energy min_sat() const;
  Energy max_sat() const;
};

struct FitnessCriteria {
  bool use_uniformity = true;
  bool use_correctness = true;
  bool use_sparsity = false;
  std::size_t desired_sparsity = 0;
  bool use_gap = false;
  Energy desired_gap = 0;
  Energy correctness_constant = 10;

  /// Uniformity + correctness.
  static FitnessCriteria correct() { return {}; }

  /// Comma list such as "uniformity,correctness,sparsity=7,gap=1,C=10".
  static FitnessCriteria parse(std::string_view text);
  std::string to_string() const;

  void validate() const;

  friend bool operator==(const FitnessCriteria&, const FitnessCriteria&) = default;
};

/// The 8 assignments of (a, b, c) split by the canonical sorted clause of a
/// type: the first 3 - t literals positive, the last t negated.
struct ClauseAssignments {
  std::array<std::array<std::uint8_t, 3>, 7> sat{};
  std::array<std::uint8_t, 3> unsat{};
};

ClauseAssignments clause_assignments(ClauseType t);

PatternAnalysis analyze(const PatternQubo& p, ClauseType t);

/// Sum of the enabled penalties (always <= 0).
Energy fitness(const PatternAnalysis& a, const FitnessCriteria& crit);
Energy fitness(const PatternQubo& p, ClauseType t, const FitnessCriteria& crit);

struct EnumerationOptions {
  std::uint64_t budget = 1'000'000'000;
  unsigned threads = 0;
};

/// Every pattern over the range with zero fitness, in lexicographic order of
/// (values[0], ..., values[9]). Throws InfeasibleEnumeration when the
/// candidate count exceeds the budget.
std::vector<PatternQubo> enumerate_patterns(const ValueRange& range, ClauseType t,
                                            const FitnessCriteria& crit,
                                            const EnumerationOptions& opts = {});

/// Candidate count (range size)^10, saturating at UINT64_MAX.
std::uint64_t enumeration_candidates(const ValueRange& range);

/// 80-byte key; byte order matches the lexicographic order of the values.
std::string canonical_key(const PatternQubo& p);
PatternQubo pattern_from_key(std::string_view key);

}  // namespace patqubo
