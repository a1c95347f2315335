#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "patqubo/evolution.hpp"
#include "patqubo/pattern.hpp"

namespace patqubo {

struct FoundPattern {
  PatternQubo pattern;
  std::size_t restart = 0;
  std::size_t generation = 0;
  /// restart * generations + generation
  std::uint64_t total_generation = 0;
};

struct SeriesPoint {
  std::uint64_t total_generation = 0;
  std::size_t found = 0;
};

struct TypeSearch {
  ClauseType type = ClauseType::kType0;
  /// Distinct zero-fitness patterns ordered by canonical key.
  std::vector<FoundPattern> found;
  /// Distinct patterns found up to each logged generation.
  std::vector<SeriesPoint> series;
  EvalLog log;
  std::size_t evaluations = 0;
};

struct SearchReport {
  ValueRange range{0, 0};
  FitnessCriteria criteria;
  EAParams params;
  std::array<TypeSearch, 4> per_type;

  std::size_t total_found() const;
  /// Sum of the per-type series at each logged generation.
  std::vector<SeriesPoint> cumulative() const;

  /// JSON document with parameters, patterns and series.
  void write_json(std::ostream& out) const;
  /// `total_generation,type0,type1,type2,type3,total`
  void write_series_csv(std::ostream& out) const;
  /// `range,criteria,type,count`
  void write_counts_csv(std::ostream& out, bool header = true) const;
};

/// Presets mirroring the two experiment scales: many short runs for small
/// ranges, fewer long runs for big ones.
EAParams small_range_preset();
EAParams big_range_preset();

/// Genome of 10 loci over the range; collects every zero-fitness individual
/// evaluated in any restart.
TypeSearch search_patterns(const ValueRange& range, ClauseType t, const FitnessCriteria& crit,
                           const EAParams& params);

/// search_patterns for each clause type with independent seeds.
SearchReport search_all_types(const ValueRange& range, const FitnessCriteria& crit,
                              const EAParams& params);

}  // namespace patqubo
