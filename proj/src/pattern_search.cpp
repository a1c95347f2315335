#include "patqubo/pattern_search.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <string>

#include "json.hpp"

#include "patqubo/rng.hpp"

namespace patqubo {

EAParams small_range_preset() {
  EAParams p;
  p.pop_size = 100;
  p.mut_rate = 0.5;
  p.rec_rate = 0.5;
  p.par_rate = 0.3;
  p.elt_rate = 0.1;
  p.mig_rate = 0.1;
  p.restarts = 500;
  p.generations = 10;
  p.direction = Direction::kMaximize;
  return p;
}

EAParams big_range_preset() {
  EAParams p = small_range_preset();
  p.pop_size = 300;
  p.restarts = 100;
  p.generations = 100;
  return p;
}

namespace {

PatternQubo decode(const Genome& g, const ValueRange& range) {
  PatternQubo p;
  for (std::size_t k = 0; k < PatternQubo::kSize; ++k) p.values[k] = range.lo() + g[k];
  return p;
}

}  // namespace

TypeSearch search_patterns(const ValueRange& range, ClauseType t, const FitnessCriteria& crit,
                           const EAParams& params) {
  crit.validate();
  EAParams p = params;
  p.direction = Direction::kMaximize;
  const GenomeSpec spec = GenomeSpec::uniform(PatternQubo::kSize, static_cast<int>(range.size()));
  const FitnessFn fitness_fn = [&](const Genome& g, std::uint64_t) -> Fitness {
    return fitness(decode(g, range), t, crit);
  };
  RunResult r = run(spec, p, fitness_fn, [](const Individual& ind) { return ind.fitness == 0; });

  TypeSearch out;
  out.type = t;
  out.evaluations = r.evaluations;

  // First discovery per key, in (restart, generation, evaluation) order.
  std::map<std::string, FoundPattern> first;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> new_per_generation;
  for (const auto& c : r.collected) {
    const PatternQubo pattern = decode(c.individual.genome, range);
    auto [it, inserted] = first.try_emplace(canonical_key(pattern));
    if (!inserted) continue;
    it->second = {pattern, c.restart, c.generation, c.restart * p.generations + c.generation};
    ++new_per_generation[{c.restart, c.generation}];
  }
  for (auto& [key, fp] : first) out.found.push_back(fp);

  std::size_t found = 0;
  for (const auto& rec : r.log.records) {
    if (auto it = new_per_generation.find({rec.restart, rec.generation});
        it != new_per_generation.end())
      found += it->second;
    const std::uint64_t total = rec.restart * p.generations + rec.generation;
    if (!out.series.empty() && out.series.back().total_generation == total)
      out.series.back().found = found;
    else
      out.series.push_back({total, found});
  }
  out.log = std::move(r.log);
  return out;
}

SearchReport search_all_types(const ValueRange& range, const FitnessCriteria& crit,
                              const EAParams& params) {
  SearchReport report;
  report.range = range;
  report.criteria = crit;
  report.params = params;
  for (ClauseType t : kAllClauseTypes) {
    EAParams p = params;
    p.seed = mix_seed(params.seed, 100 + index_of(t));
    report.per_type[index_of(t)] = search_patterns(range, t, crit, p);
  }
  return report;
}

std::size_t SearchReport::total_found() const {
  std::size_t n = 0;
  for (const auto& t : per_type) n += t.found.size();
  return n;
}

std::vector<SeriesPoint> SearchReport::cumulative() const {
  std::vector<SeriesPoint> out = per_type[0].series;
  for (std::size_t t = 1; t < per_type.size(); ++t) {
    for (std::size_t i = 0; i < out.size() && i < per_type[t].series.size(); ++i)
      out[i].found += per_type[t].series[i].found;
  }
  return out;
}

void SearchReport::write_json(std::ostream& out) const {
  nlohmann::ordered_json j;
  j["range"] = {{"lo", range.lo()}, {"hi", range.hi()}};
  j["criteria"] = criteria.to_string();
  j["params"] = {{"pop_size", params.pop_size},       {"mut_rate", params.mut_rate},
                 {"rec_rate", params.rec_rate},       {"par_rate", params.par_rate},
                 {"elt_rate", params.elt_rate},       {"mig_rate", params.mig_rate},
                 {"generations", params.generations}, {"restarts", params.restarts},
                 {"seed", params.seed}};
  j["total_found"] = total_found();
  nlohmann::ordered_json types = nlohmann::ordered_json::array();
  for (const auto& t : per_type) {
    nlohmann::ordered_json jt;
    jt["type"] = index_of(t.type);
    jt["count"] = t.found.size();
    jt["evaluations"] = t.evaluations;
    nlohmann::ordered_json patterns = nlohmann::ordered_json::array();
    for (const auto& f : t.found) {
      patterns.push_back({{"values", f.pattern.values},
                          {"restart", f.restart},
                          {"generation", f.generation},
                          {"total_generation", f.total_generation}});
    }
    jt["patterns"] = std::move(patterns);
    types.push_back(std::move(jt));
  }
  j["types"] = std::move(types);
  out << j.dump(2) << '\n';
}

void SearchReport::write_series_csv(std::ostream& out) const {
  out << "total_generation,type0,type1,type2,type3,total\n";
  const auto total = cumulative();
  for (std::size_t i = 0; i < total.size(); ++i) {
    out << total[i].total_generation;
    for (const auto& t : per_type) out << ',' << (i < t.series.size() ? t.series[i].found : 0);
    out << ',' << total[i].found << '\n';
  }
}

void SearchReport::write_counts_csv(std::ostream& out, bool header) const {
  if (header) out << "range,criteria,type,count\n";
  for (const auto& t : per_type) {
    out << range.to_string() << ",\"" << criteria.to_string() << "\"," << index_of(t.type) << ','
        << t.found.size() << '\n';
  }
}

}  // namespace patqubo
