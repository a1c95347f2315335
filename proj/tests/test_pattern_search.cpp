#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "json.hpp"
#include "oracles.hpp"
#include "patqubo/pattern_search.hpp"

using namespace patqubo;

namespace {

EAParams quick_params(std::uint64_t seed) {
  EAParams p = small_range_preset();
  p.restarts = 40;
  p.seed = seed;
  return p;
}

}  // namespace

TEST(Presets, MatchPublishedParameters) {
  const EAParams s = small_range_preset();
  EXPECT_EQ(s.pop_size, 100u);
  EXPECT_EQ(s.restarts * s.generations, 5000u);
  EXPECT_EQ(s.generations, 10u);
  EXPECT_DOUBLE_EQ(s.mut_rate, 0.5);
  EXPECT_DOUBLE_EQ(s.rec_rate, 0.5);
  EXPECT_DOUBLE_EQ(s.elt_rate, 0.1);
  EXPECT_DOUBLE_EQ(s.mig_rate, 0.1);
  const EAParams b = big_range_preset();
  EXPECT_EQ(b.pop_size, 300u);
  EXPECT_EQ(b.restarts * b.generations, 10000u);
}

TEST(Search, FindsOnlyValidDistinctPatterns) {
  const auto r = search_patterns(ValueRange(-1, 1), ClauseType::kType1, FitnessCriteria::correct(), quick_params(1));
  EXPECT_FALSE(r.found.empty());
  std::set<PatternQubo> seen;
  for (const auto& fp : r.found) {
    EXPECT_TRUE(oracle::check_pattern(fp.pattern.values, 1).valid);
    EXPECT_TRUE(seen.insert(fp.pattern).second);
  }
  EXPECT_LE(r.found.size(), 7u);
  ASSERT_FALSE(r.series.empty());
  for (std::size_t i = 1; i < r.series.size(); ++i) EXPECT_GE(r.series[i].found, r.series[i - 1].found);
  EXPECT_EQ(r.series.back().found, r.found.size());
}

TEST(Search, ZeroRangeFindsNothing) {
  const auto r = search_patterns(ValueRange(0, 0), ClauseType::kType0, FitnessCriteria::correct(), quick_params(2));
  EXPECT_TRUE(r.found.empty());
}

TEST(Search, ExtraCriteriaGiveSubsetOfEnumeration) {
  const auto crit = FitnessCriteria::parse("uniformity,correctness,sparsity=7,gap=1");
  std::size_t total = 0;
  for (ClauseType t : kAllClauseTypes) {
    const auto all = enumerate_patterns(ValueRange(-1, 1), t, FitnessCriteria::correct());
    const auto strict = enumerate_patterns(ValueRange(-1, 1), t, crit);
    total += strict.size();
    for (const auto& p : strict) {
      EXPECT_NE(std::find(all.begin(), all.end(), p), all.end());
      EXPECT_EQ(p.nonzero_count(), 7u);
    }
    const auto r = search_patterns(ValueRange(-1, 1), t, crit, quick_params(3));
    for (const auto& fp : r.found) EXPECT_NE(std::find(strict.begin(), strict.end(), fp.pattern), strict.end());
  }
  EXPECT_GT(total, 0u);
  EXPECT_LT(total, 27u);
}

TEST(Search, ZeroGenerationsCountsInitialHits) {
  EAParams p = quick_params(4);
  p.generations = 0;
  const auto report = search_all_types(ValueRange(-1, 1), FitnessCriteria::correct(), p);
  for (const auto& t : report.per_type) {
    for (const auto& fp : t.found) EXPECT_EQ(fp.generation, 0u);
    EXPECT_EQ(t.log.records.size(), p.restarts);
  }
}

TEST(Report, OutputsAreDeterministicAndWellFormed) {
  const auto a = search_all_types(ValueRange(-1, 1), FitnessCriteria::correct(), quick_params(5));
  const auto b = search_all_types(ValueRange(-1, 1), FitnessCriteria::correct(), quick_params(5));
  std::ostringstream sa, sb, ja, ca;
  a.write_series_csv(sa);
  b.write_series_csv(sb);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(sa.str().rfind("total_generation,type0,type1,type2,type3,total\n", 0), 0u);
  a.write_json(ja);
  const auto doc = nlohmann::json::parse(ja.str());
  EXPECT_EQ(doc["range"]["lo"], -1);
  EXPECT_EQ(doc["range"]["hi"], 1);
  std::size_t n = 0;
  for (const auto& t : doc["types"]) n += t["patterns"].size();
  EXPECT_EQ(n, a.total_found());
  a.write_counts_csv(ca);
  EXPECT_NE(ca.str().find("type"), std::string::npos);
  const auto cum = a.cumulative();
  ASSERT_FALSE(cum.empty());
  EXPECT_EQ(cum.back().found, a.total_found());
}
