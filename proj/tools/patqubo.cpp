// patqubo command-line tool.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "patqubo/commands.hpp"
#include "patqubo/error.hpp"
#include "patqubo/pattern.hpp"

namespace cmd = patqubo::commands;

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  for (char ch : text) {
    if (ch == ',') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else {
      item += ch;
    }
  }
  if (!item.empty()) out.push_back(item);
  return out;
}

struct EaFlags {
  std::size_t pop = 0;
  std::size_t generations = 0;
  std::size_t restarts = 0;
  double mut = -1, rec = -1, elt = -1, mig = -1;
  unsigned threads = 1;

  void add(CLI::App* app) {
    app->add_option("--pop", pop, "Population size");
    app->add_option("--generations", generations, "Generations per restart");
    app->add_option("--restarts", restarts, "Fresh-population restarts");
    app->add_option("--mut-rate", mut, "Per-individual mutation probability");
    app->add_option("--rec-rate", rec, "Per-pair recombination probability");
    app->add_option("--elt-rate", elt, "Elite fraction");
    app->add_option("--mig-rate", mig, "Random-immigrant fraction");
    app->add_option("--threads", threads, "Worker threads (0 = all cores)");
  }

  void apply(patqubo::EAParams& p, const CLI::App* app) const {
    if (pop) p.pop_size = pop;
    if (app->count("--generations")) p.generations = generations;
    if (restarts) p.restarts = restarts;
    if (mut >= 0) p.mut_rate = mut;
    if (rec >= 0) p.rec_rate = rec;
    if (elt >= 0) p.elt_rate = elt;
    if (mig >= 0) p.mig_rate = mig;
    p.threads = threads;
  }
};

struct SolverFlags {
  std::size_t reads = 1;
  std::int64_t timeout_ms = 150;
  std::uint64_t iter_budget = 0;
  std::size_t tenure = 0;

  void add(CLI::App* app, std::size_t default_reads) {
    reads = default_reads;
    app->add_option("--reads", reads, "Tabu reads per solve")->capture_default_str();
    app->add_option("--timeout-ms", timeout_ms, "Wall-clock timeout per read")->capture_default_str();
    app->add_option("--iter-budget", iter_budget,
                    "Deterministic iteration budget per read (replaces the timeout)");
    app->add_option("--tenure", tenure, "Tabu tenure (0 = min(20, dim/4))");
  }

  patqubo::SolverConfig config() const {
    patqubo::SolverConfig c;
    c.num_reads = reads;
    c.timeout_ms = timeout_ms;
    c.iteration_budget = iter_budget;
    c.tabu_tenure = tenure;
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthesize and evaluate MAX-3SAT QUBO encodings built from pattern QUBOs"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "Random seed")->capture_default_str();

  // gen-formulas
  cmd::GenFormulasOptions gen;
  auto* gen_cmd = app.add_subcommand("gen-formulas", "Write uniform random 3-SAT datasets");
  gen_cmd->add_option("--preset", gen.preset, "uniform-500 | uniform-1000");
  gen_cmd->add_option("--vars", gen.num_vars, "Variables per formula (custom)");
  gen_cmd->add_option("--clauses", gen.num_clauses, "Clauses per formula (custom)");
  gen_cmd->add_option("--count", gen.count, "Number of formulas (custom)");
  gen_cmd->add_option("--out", gen.out_dir, "Output directory")->required();

  // enumerate-patterns
  cmd::EnumerateOptions en;
  std::string en_range = "-1:1";
  std::string en_criteria = "uniformity,correctness";
  auto* en_cmd = app.add_subcommand("enumerate-patterns", "Exhaustively enumerate pattern QUBOs");
  en_cmd->add_option("--range", en_range, "Value range lo:hi")->capture_default_str();
  en_cmd->add_option("--criteria", en_criteria, "Fitness criteria list")->capture_default_str();
  en_cmd->add_option("--budget", en.budget, "Maximum candidate count")->capture_default_str();
  en_cmd->add_option("--threads", en.threads, "Worker threads (0 = all cores)");
  en_cmd->add_option("--out", en.out_dir, "Output directory")->required();

  // search-patterns
  cmd::SearchOptions se;
  std::string se_preset = "small-range";
  std::vector<std::string> se_ranges;
  std::string se_criteria = "uniformity,correctness";
  EaFlags se_ea;
  auto* se_cmd = app.add_subcommand("search-patterns", "Evolutionary pattern QUBO search");
  se_cmd->add_option("--preset", se_preset, "small-range | big-range")->capture_default_str();
  se_cmd->add_option("--range", se_ranges, "Value range lo:hi (repeatable)");
  se_cmd->add_option("--criteria", se_criteria, "Fitness criteria list")->capture_default_str();
  se_cmd->add_option("--runs", se.runs, "Independent runs per range")->capture_default_str();
  se_cmd->add_option("--out", se.out_dir, "Output directory")->required();
  se_ea.add(se_cmd);

  // build-and-solve
  cmd::BuildSolveOptions bs;
  SolverFlags bs_solver;
  auto* bs_cmd = app.add_subcommand("build-and-solve", "Assemble a formula QUBO and solve it");
  bs_cmd->add_option("--formula", bs.formula, "DIMACS CNF file")->required();
  bs_cmd->add_option("--library", bs.library, "Pattern library file");
  bs_cmd->add_option("--policy", bs.policy,
                     "genome | first | fixed-random | individual-random | random | chancellor | "
                     "nuesslein")
      ->capture_default_str();
  bs_cmd->add_option("--genome", bs.genome_file, "Selection genome file (policy genome)");
  bs_cmd->add_flag("--exact", bs.exact, "Use the exhaustive solver");
  bs_cmd->add_option("--trials", bs.guess_trials, "Trials for the random policy");
  bs_cmd->add_option("--data-dir", bs.data_dir, "Directory with named libraries");
  bs_cmd->add_option("--qubo-out", bs.qubo_out, "Write the assembled QUBO here");
  bs_solver.add(bs_cmd, 10);

  // benchmark
  cmd::BenchmarkOptions be;
  std::string be_methods = "ea,chancellor,fixed-random,individual-random";
  EaFlags be_ea;
  SolverFlags be_solver;
  auto* be_cmd = app.add_subcommand("benchmark", "Selection EA against baselines on a dataset");
  be_cmd->add_option("--dataset", be.dataset, "Directory of .cnf files")->required();
  be_cmd->add_option("--library", be.library, "Pattern library file");
  be_cmd->add_option("--methods", be_methods, "Comma list of methods")->capture_default_str();
  be_cmd->add_option("--baseline-reads", be.baseline_reads,
                     "Reads per baseline (0 = match the EA's total reads)");
  be_cmd->add_option("--data-dir", be.data_dir, "Directory with named libraries");
  be_cmd->add_option("--out", be.out_dir, "Output directory")->required();
  be_cmd->add_option("--jobs", be.threads, "Formulas processed in parallel");
  be_ea.add(be_cmd);
  be_solver.add(be_cmd, 5);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_cmd) {
      gen.seed = seed;
      const auto files = cmd::gen_formulas(gen);
      std::cout << "wrote " << files.size() << " formulas to " << gen.out_dir.string() << '\n';
    } else if (*en_cmd) {
      en.range = patqubo::ValueRange::parse(en_range);
      en.criteria = patqubo::FitnessCriteria::parse(en_criteria);
      const auto summary = cmd::enumerate_patterns(en);
      std::size_t total = 0;
      for (std::size_t t = 0; t < 4; ++t) {
        std::cout << "type " << t << ": " << summary.counts[t];
        if (summary.counts_without_uniformity)
          std::cout << " (without uniformity: " << (*summary.counts_without_uniformity)[t] << ')';
        std::cout << '\n';
        total += summary.counts[t];
      }
      std::cout << "total: " << total << '\n';
      if (total == 0) std::cerr << "warning: no pattern satisfies the criteria in this range\n";
      std::cout << "library: " << summary.library_path.string() << '\n';
    } else if (*se_cmd) {
      if (se_preset == "small-range") {
        se.params = patqubo::small_range_preset();
        if (se_ranges.empty()) se_ranges = {"-1:1", "-2:2", "-3:3"};
      } else if (se_preset == "big-range") {
        se.params = patqubo::big_range_preset();
        if (se_ranges.empty()) se_ranges = {"-10:10", "-20:20", "-40:40"};
      } else {
        throw patqubo::InvalidInput("unknown search preset '" + se_preset + "'");
      }
      se_ea.apply(se.params, se_cmd);
      se.params.seed = seed;
      for (const auto& r : se_ranges) se.ranges.push_back(patqubo::ValueRange::parse(r));
      se.criteria = patqubo::FitnessCriteria::parse(se_criteria);
      for (const auto& report : cmd::search_patterns(se)) {
        std::cout << "range " << report.range.to_string() << ':';
        for (const auto& t : report.per_type) std::cout << ' ' << t.found.size();
        std::cout << " (total " << report.total_found() << ")\n";
      }
    } else if (*bs_cmd) {
      bs.seed = seed;
      bs.solver = bs_solver.config();
      const auto r = cmd::build_and_solve(bs);
      std::cout << "policy " << r.policy << ": ";
      if (r.energy) std::cout << "dim " << r.dim << ", energy " << *r.energy << ", ";
      std::cout << "satisfied " << r.satisfied << '/' << r.num_clauses << '\n';
    } else if (*be_cmd) {
      be.methods = split_list(be_methods);
      be.ea.generations = 50;
      be_ea.apply(be.ea, be_cmd);
      be.solver = be_solver.config();
      be.seed = seed;
      const auto rows = cmd::benchmark(be);
      cmd::write_benchmark_csv(std::cout, rows);
    }
  } catch (const patqubo::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
