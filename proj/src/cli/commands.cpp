#include "patqubo/commands.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "json.hpp"
#include "patqubo/error.hpp"
#include "patqubo/parallel.hpp"
#include "patqubo/rng.hpp"
#include "patqubo/selection.hpp"

#ifndef PATQUBO_VERSION
#define PATQUBO_VERSION "0.0.0"
#endif

namespace patqubo::commands {

using json = nlohmann::ordered_json;

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

json to_json(const EAParams& p) {
  return {{"pop_size", p.pop_size},       {"mut_rate", p.mut_rate},
          {"rec_rate", p.rec_rate},       {"par_rate", p.par_rate},
          {"elt_rate", p.elt_rate},       {"mig_rate", p.mig_rate},
          {"generations", p.generations}, {"restarts", p.restarts},
          {"seed", p.seed}};
}

json to_json(const SolverConfig& c) {
  return {{"num_reads", c.num_reads},
          {"timeout_ms", c.timeout_ms},
          {"iteration_budget", c.iteration_budget},
          {"tabu_tenure", c.tabu_tenure},
          {"stagnation_factor", c.stagnation_factor},
          {"seed", c.seed}};
}

class Manifest {
 public:
  Manifest(std::string command, std::uint64_t seed) : started_(utc_now()) {
    doc_["command"] = std::move(command);
    doc_["seed"] = seed;
    doc_["version"] = PATQUBO_VERSION;
  }

  json& params() { return doc_["params"]; }
  void output(const fs::path& p) { outputs_.push_back(p.string()); }

  void write(const fs::path& dir) {
    doc_["started"] = started_;
    doc_["finished"] = utc_now();
    doc_["outputs"] = outputs_;
    std::ofstream out(dir / "manifest.json");
    if (!out) throw ConfigError("cannot write manifest in '" + dir.string() + "'");
    out << doc_.dump(2) << '\n';
  }

 private:
  json doc_;
  std::string started_;
  std::vector<std::string> outputs_;
};

void ensure_dir(const fs::path& dir) {
  if (dir.empty()) throw InvalidInput("an output directory is required");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "'");
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw ConfigError("cannot write '" + p.string() + "'");
  return out;
}

std::string range_tag(const ValueRange& r) {
  return std::to_string(r.lo()) + "_" + std::to_string(r.hi());
}

}  // namespace

std::optional<FormulaPreset> formula_preset(const std::string& name) {
  if (name == "uniform-500") return FormulaPreset{name, 100, 145, 500};
  if (name == "uniform-1000") return FormulaPreset{name, 50, 298, 1000};
  return std::nullopt;
}

Formula load_formula(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open formula '" + path.string() + "'");
  return parse_dimacs(in);
}

std::vector<fs::path> gen_formulas(const GenFormulasOptions& opts) {
  FormulaPreset spec{"custom", opts.count, opts.num_vars, opts.num_clauses};
  if (!opts.preset.empty()) {
    auto preset = formula_preset(opts.preset);
    if (!preset) throw InvalidInput("unknown formula preset '" + opts.preset + "'");
    spec = *preset;
  }
  if (spec.count < 1) throw InvalidInput("formula count must be positive");
  ensure_dir(opts.out_dir);

  Manifest manifest("gen-formulas", opts.seed);
  manifest.params() = {{"preset", spec.name},
                       {"count", spec.count},
                       {"num_vars", spec.num_vars},
                       {"num_clauses", spec.num_clauses}};
  std::vector<fs::path> files;
  for (std::size_t i = 0; i < spec.count; ++i) {
    const Formula f = generate_uniform(spec.num_vars, spec.num_clauses, mix_seed(opts.seed, i));
    std::ostringstream name;
    name << spec.name << '-' << std::setw(3) << std::setfill('0') << i << ".cnf";
    const fs::path p = opts.out_dir / name.str();
    auto out = open_out(p);
    out << "c uniform random 3-SAT, seed " << opts.seed << " index " << i << '\n';
    write_dimacs(out, f);
    files.push_back(p);
    manifest.output(p);
  }
  manifest.write(opts.out_dir);
  return files;
}

EnumerateSummary enumerate_patterns(const EnumerateOptions& opts) {
  ensure_dir(opts.out_dir);
  Manifest manifest("enumerate-patterns", 0);
  manifest.params() = {{"range", opts.range.to_string()},
                       {"criteria", opts.criteria.to_string()},
                       {"budget", opts.budget}};

  EnumerationOptions eopts{opts.budget, opts.threads};
  EnumerateSummary summary;
  FitnessCriteria relaxed = opts.criteria;
  relaxed.use_uniformity = false;
  const bool report_relaxed = opts.criteria.use_uniformity &&
                              (relaxed.use_correctness || relaxed.use_sparsity || relaxed.use_gap);
  if (report_relaxed) summary.counts_without_uniformity.emplace();

  for (ClauseType t : kAllClauseTypes) {
    summary.library.set(t) = patqubo::enumerate_patterns(opts.range, t, opts.criteria, eopts);
    summary.counts[index_of(t)] = summary.library.size(t);
    if (report_relaxed) {
      (*summary.counts_without_uniformity)[index_of(t)] =
          patqubo::enumerate_patterns(opts.range, t, relaxed, eopts).size();
    }
  }

  summary.library_path = opts.out_dir / ("library_" + range_tag(opts.range) + ".lib");
  save_library(summary.library_path, summary.library);
  manifest.output(summary.library_path);

  const fs::path counts_path = opts.out_dir / ("counts_" + range_tag(opts.range) + ".csv");
  {
    auto out = open_out(counts_path);
    out << "range,criteria,type,count\n";
    for (ClauseType t : kAllClauseTypes) {
      out << opts.range.to_string() << ",\"" << opts.criteria.to_string() << "\","
          << index_of(t) << ',' << summary.counts[index_of(t)] << '\n';
    }
    if (summary.counts_without_uniformity) {
      for (ClauseType t : kAllClauseTypes) {
        out << opts.range.to_string() << ",\"" << relaxed.to_string() << "\"," << index_of(t)
            << ',' << (*summary.counts_without_uniformity)[index_of(t)] << '\n';
      }
    }
  }
  manifest.output(counts_path);
  manifest.write(opts.out_dir);
  return summary;
}

std::vector<SearchReport> search_patterns(const SearchOptions& opts) {
  if (opts.ranges.empty()) throw InvalidInput("at least one value range is required");
  if (opts.runs < 1) throw InvalidInput("runs must be positive");
  ensure_dir(opts.out_dir);
  Manifest manifest("search-patterns", opts.params.seed);
  json ranges = json::array();
  for (const auto& r : opts.ranges) ranges.push_back(r.to_string());
  manifest.params() = {{"ranges", ranges},
                       {"criteria", opts.criteria.to_string()},
                       {"runs", opts.runs},
                       {"ea", to_json(opts.params)}};

  std::vector<SearchReport> reports;
  const fs::path counts_path = opts.out_dir / "counts.csv";
  auto counts = open_out(counts_path);
  counts << "range,criteria,run,type,count\n";
  for (std::size_t ri = 0; ri < opts.ranges.size(); ++ri) {
    for (std::size_t run = 0; run < opts.runs; ++run) {
      EAParams p = opts.params;
      p.seed = mix_seed(opts.params.seed, ri * 1000 + run);
      SearchReport report = search_all_types(opts.ranges[ri], opts.criteria, p);
      const std::string stem = "search_" + range_tag(opts.ranges[ri]) + "_run" + std::to_string(run);
      {
        const fs::path jp = opts.out_dir / (stem + ".json");
        auto out = open_out(jp);
        report.write_json(out);
        manifest.output(jp);
      }
      {
        const fs::path sp = opts.out_dir / (stem + "_series.csv");
        auto out = open_out(sp);
        report.write_series_csv(out);
        manifest.output(sp);
      }
      for (const auto& t : report.per_type) {
        counts << report.range.to_string() << ",\"" << report.criteria.to_string() << "\"," << run
               << ',' << index_of(t.type) << ',' << t.found.size() << '\n';
      }
      reports.push_back(std::move(report));
    }
  }
  counts.close();
  manifest.output(counts_path);
  manifest.write(opts.out_dir);
  return reports;
}

std::vector<int> read_genome(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open genome '" + path.string() + "'");
  std::vector<int> g;
  std::string token;
  while (in >> token) {
    try {
      std::size_t used = 0;
      g.push_back(std::stoi(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw ParseError("genome file holds a non-integer token '" + token + "'");
    }
  }
  return g;
}

BuildSolveReport build_and_solve(const BuildSolveOptions& opts) {
  const Formula f = load_formula(opts.formula);
  BuildSolveReport report;
  report.policy = opts.policy;
  report.num_vars = f.num_vars();
  report.num_clauses = f.num_clauses();

  if (opts.policy == "random") {
    const auto r = baseline_random_guess(f, opts.guess_trials, opts.seed);
    report.satisfied = r.best_satisfied;
    return report;
  }

  PatternLibrary lib;
  SelectionGenome genome;
  const fs::path data_dir = opts.data_dir.empty() ? default_data_dir() : opts.data_dir;
  if (opts.policy == "chancellor" || opts.policy == "nuesslein") {
    lib = load_named_library(opts.policy, data_dir);
    genome = per_type_genome(f, {0, 0, 0, 0});
  } else {
    if (opts.library.empty()) throw ConfigError("policy '" + opts.policy + "' needs --library");
    lib = load_library(opts.library);
    lib.require_types_of(f);
    Rng rng(opts.seed);
    if (opts.policy == "genome") {
      if (opts.genome_file.empty()) throw ConfigError("policy 'genome' needs --genome");
      genome = read_genome(opts.genome_file);
    } else if (opts.policy == "first") {
      genome = per_type_genome(f, {0, 0, 0, 0});
    } else if (opts.policy == "fixed-random") {
      std::array<int, 4> choice{};
      for (ClauseType t : kAllClauseTypes) {
        const std::size_t n = lib.size(t);
        choice[index_of(t)] = n == 0 ? 0 : static_cast<int>(rng.below(n));
      }
      genome = per_type_genome(f, choice);
    } else if (opts.policy == "individual-random") {
      genome = random_genome(selection_genome_spec(f, lib), rng);
    } else {
      throw InvalidInput("unknown policy '" + opts.policy + "'");
    }
  }

  const AssembledQubo assembled = assemble(f, lib, genome);
  report.dim = assembled.matrix.dim();
  if (!opts.qubo_out.empty()) {
    auto out = open_out(opts.qubo_out);
    write_qubo(out, assembled.matrix);
  }

  SolveResult solved;
  if (opts.exact) {
    solved = exact_solve(assembled.matrix);
    report.exact = true;
  } else {
    SolverConfig cfg = opts.solver;
    cfg.seed = opts.seed;
    solved = tabu_search(assembled.matrix, cfg);
  }
  report.energy = solved.best_energy;
  report.satisfied =
      count_satisfied(f, std::span(solved.best_assignment).first(assembled.num_vars));
  return report;
}

void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows) {
  out << "formula_id,method,best_satisfied,clauses,reads,wallclock_ms,seed\n";
  for (const auto& r : rows) {
    out << r.formula_id << ',' << r.method << ',' << r.best_satisfied << ',' << r.clauses << ','
        << r.reads << ',' << r.wallclock_ms << ',' << r.seed << '\n';
  }
}

std::vector<BenchmarkRow> benchmark(const BenchmarkOptions& opts) {
  static const std::vector<std::string> kKnown = {"ea",         "chancellor",       "nuesslein",
                                                  "fixed-random", "individual-random", "random"};
  for (const auto& m : opts.methods) {
    if (std::find(kKnown.begin(), kKnown.end(), m) == kKnown.end())
      throw InvalidInput("unknown benchmark method '" + m + "'");
  }
  if (opts.dataset.empty() || !fs::is_directory(opts.dataset))
    throw ConfigError("dataset directory '" + opts.dataset.string() + "' does not exist");

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(opts.dataset)) {
    if (entry.is_regular_file() && entry.path().extension() == ".cnf") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ConfigError("dataset '" + opts.dataset.string() + "' holds no .cnf files");

  auto uses = [&](const std::string& m) {
    return std::find(opts.methods.begin(), opts.methods.end(), m) != opts.methods.end();
  };
  const bool needs_library = uses("ea") || uses("fixed-random") || uses("individual-random");
  PatternLibrary lib;
  if (needs_library) {
    if (opts.library.empty()) throw ConfigError("benchmark methods need --library");
    lib = load_library(opts.library);
  }
  const fs::path data_dir = opts.data_dir.empty() ? default_data_dir() : opts.data_dir;
  std::map<std::string, PatternLibrary> named;
  for (const char* name : {"chancellor", "nuesslein"}) {
    if (uses(name)) named.emplace(name, load_named_library(name, data_dir));
  }
  opts.ea.validate();
  opts.solver.validate();

  // Reads the EA would spend if every evaluation ran all N reads; used when
  // the EA is not among the methods and no explicit budget is set.
  const std::size_t per_gen_evals =
      opts.ea.offspring_target() + opts.ea.pop_size + opts.ea.migrant_count();
  const std::size_t nominal_ea_reads =
      opts.ea.restarts * (opts.ea.pop_size + opts.ea.generations * per_gen_evals) *
      opts.solver.num_reads;

  std::vector<std::vector<BenchmarkRow>> per_formula(files.size());
  std::vector<std::size_t> matched_reads(files.size(), 0);
  parallel_for(files.size(), opts.threads, [&](std::size_t fi) {
    const Formula f = load_formula(files[fi]);
    const std::string id = files[fi].stem().string();
    const std::uint64_t fseed = mix_seed(opts.seed, fi);
    auto& rows = per_formula[fi];
    using Clock = std::chrono::steady_clock;

    std::size_t budget = opts.baseline_reads;
    if (uses("ea")) {
      const auto t0 = Clock::now();
      EAParams p = opts.ea;
      p.seed = fseed;
      if (resolve_threads(opts.threads) > 1) p.threads = 1;
      const SelectionResult r = evolve_selection(f, lib, p, opts.solver);
      const auto ms =
          std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
      rows.push_back({id, "ea", r.best_satisfied, f.num_clauses(), r.solver_reads, ms, fseed});
      if (budget == 0) budget = r.solver_reads;
    }
    if (budget == 0) budget = nominal_ea_reads;
    matched_reads[fi] = budget;

    SolverConfig baseline_cfg = opts.solver;
    baseline_cfg.num_reads = budget;
    for (const auto& method : opts.methods) {
      const auto slot = std::find(kKnown.begin(), kKnown.end(), method) - kKnown.begin();
      const std::uint64_t mseed = mix_seed(fseed, static_cast<std::uint64_t>(slot) + 1);
      BaselineResult r;
      if (method == "ea") {
        continue;
      } else if (method == "fixed-random") {
        r = baseline_fixed_random(f, lib, baseline_cfg, mseed);
      } else if (method == "individual-random") {
        r = baseline_individual_random(f, lib, baseline_cfg, mseed);
      } else if (method == "random") {
        const auto g = baseline_random_guess(f, budget, mseed);
        r = {"random", g.best_satisfied, g.trials, g.wallclock_ms};
      } else {
        SolverConfig cfg = baseline_cfg;
        cfg.seed = mseed;
        r = baseline_named_fixed(f, named.at(method), method, cfg);
      }
      rows.push_back({id, method, r.best_satisfied, f.num_clauses(), r.reads, r.wallclock_ms, mseed});
    }
    if (!opts.record_wallclock) {
      for (auto& row : rows) row.wallclock_ms = 0;
    }
  });

  std::vector<BenchmarkRow> rows;
  for (auto& r : per_formula) rows.insert(rows.end(), r.begin(), r.end());

  if (!opts.out_dir.empty()) {
    ensure_dir(opts.out_dir);
    Manifest manifest("benchmark", opts.seed);
    json methods = opts.methods;
    json budgets = json::object();
    for (std::size_t fi = 0; fi < files.size(); ++fi)
      budgets[files[fi].stem().string()] = matched_reads[fi];
    manifest.params() = {{"dataset", opts.dataset.string()},
                         {"library", opts.library.string()},
                         {"methods", methods},
                         {"ea", to_json(opts.ea)},
                         {"solver", to_json(opts.solver)},
                         {"baseline_reads", opts.baseline_reads},
                         {"baseline_reads_per_formula", budgets}};
    const fs::path csv = opts.out_dir / "results.csv";
    {
      auto out = open_out(csv);
      write_benchmark_csv(out, rows);
    }
    manifest.output(csv);
    manifest.write(opts.out_dir);
  }
  return rows;
}

}  // namespace patqubo::commands
