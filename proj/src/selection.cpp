#include "patqubo/selection.hpp"

#include <array>
#include <chrono>
#include <sstream>

#include "patqubo/error.hpp"
#include "patqubo/rng.hpp"

namespace patqubo {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t ms_since(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
}

}  // namespace

AssembledQubo assemble(const Formula& f, const PatternLibrary& lib, std::span<const int> genome) {
  if (genome.size() != f.num_clauses()) {
    std::ostringstream msg;
    msg << "selection genome has " << genome.size() << " entries for " << f.num_clauses()
        << " clauses";
    throw InvalidInput(msg.str());
  }
  AssembledQubo out{QuboMatrix(f.num_vars() + f.num_clauses()), f.num_vars(), f.num_clauses()};
  std::array<std::size_t, 4> map{};
  for (std::size_t k = 0; k < f.num_clauses(); ++k) {
    const Clause sorted = sort_clause(f.clauses()[k]);
    const ClauseType t = clause_type(sorted);
    const auto& set = lib.set(t);
    if (genome[k] < 0 || static_cast<std::size_t>(genome[k]) >= set.size()) {
      std::ostringstream msg;
      msg << "clause " << k << " (type " << index_of(t) << ") selects pattern " << genome[k]
          << " but the library holds " << set.size();
      throw InvalidInput(msg.str());
    }
    const PatternQubo& p = set[static_cast<std::size_t>(genome[k])];
    for (std::size_t i = 0; i < 3; ++i) map[i] = sorted[i].var;
    map[3] = out.aux_index(k);
    for (std::size_t e = 0; e < PatternQubo::kSize; ++e) {
      const auto [r, c] = PatternQubo::kCells[e];
      out.matrix.add(map[r], map[c], p.values[e]);
    }
  }
  return out;
}

SelectionGenome per_type_genome(const Formula& f, const std::array<int, 4>& choice) {
  SelectionGenome g(f.num_clauses());
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = choice[index_of(clause_type(f.clauses()[k]))];
  return g;
}

GenomeSpec selection_genome_spec(const Formula& f, const PatternLibrary& lib) {
  lib.require_types_of(f);
  GenomeSpec spec;
  spec.alphabet_sizes.reserve(f.num_clauses());
  for (const Clause& c : f.clauses())
    spec.alphabet_sizes.push_back(static_cast<int>(lib.size(clause_type(c))));
  return spec;
}

std::size_t best_satisfied_over_reads(const Formula& f, const AssembledQubo& assembled,
                                      const SolverConfig& cfg) {
  cfg.validate();
  const SparseQubo q(assembled.matrix);
  std::size_t best = 0;
  for (std::size_t r = 0; r < cfg.num_reads; ++r) {
    const SolveResult read = tabu_read(q, cfg, r);
    // Auxiliaries live after the formula variables; count_satisfied ignores them.
    best = std::max(best, count_satisfied(f, std::span(read.best_assignment).first(f.num_vars())));
    if (best == f.num_clauses()) break;
  }
  return best;
}

std::size_t selection_fitness(const Formula& f, const PatternLibrary& lib,
                              std::span<const int> genome, const SolverConfig& cfg) {
  return best_satisfied_over_reads(f, assemble(f, lib, genome), cfg);
}

SelectionResult evolve_selection(const Formula& f, const PatternLibrary& lib, EAParams params,
                                 const SolverConfig& solver_cfg) {
  solver_cfg.validate();
  const GenomeSpec spec = selection_genome_spec(f, lib);
  params.direction = Direction::kMaximize;

  const FitnessFn fitness_fn = [&](const Genome& g, std::uint64_t eval_seed) -> Fitness {
    SolverConfig cfg = solver_cfg;
    cfg.seed = eval_seed;
    return static_cast<Fitness>(selection_fitness(f, lib, g, cfg));
  };
  RunResult run_result = run(spec, params, fitness_fn);

  SelectionResult out;
  out.best_genome = run_result.best.individual.genome;
  out.best_satisfied = static_cast<std::size_t>(run_result.best.individual.fitness);
  out.log = std::move(run_result.log);
  out.evaluations = run_result.evaluations;
  out.solver_reads = run_result.evaluations * solver_cfg.num_reads;
  return out;
}

BaselineResult baseline_fixed_random(const Formula& f, const PatternLibrary& lib,
                                     const SolverConfig& cfg, std::uint64_t seed) {
  lib.require_types_of(f);
  const auto t0 = Clock::now();
  Rng rng(seed);
  std::array<int, 4> choice{};
  for (ClauseType t : kAllClauseTypes) {
    const std::size_t n = lib.size(t);
    choice[index_of(t)] = n == 0 ? 0 : static_cast<int>(rng.below(n));
  }
  SolverConfig solve_cfg = cfg;
  solve_cfg.seed = rng.next();
  const auto g = per_type_genome(f, choice);
  BaselineResult r{"fixed-random", selection_fitness(f, lib, g, solve_cfg), cfg.num_reads, 0};
  r.wallclock_ms = ms_since(t0);
  return r;
}

BaselineResult baseline_individual_random(const Formula& f, const PatternLibrary& lib,
                                          const SolverConfig& cfg, std::uint64_t seed) {
  const GenomeSpec spec = selection_genome_spec(f, lib);
  const auto t0 = Clock::now();
  Rng rng(seed);
  const Genome g = random_genome(spec, rng);
  SolverConfig solve_cfg = cfg;
  solve_cfg.seed = rng.next();
  BaselineResult r{"individual-random", selection_fitness(f, lib, g, solve_cfg), cfg.num_reads, 0};
  r.wallclock_ms = ms_since(t0);
  return r;
}

BaselineResult baseline_named_fixed(const Formula& f, const PatternLibrary& named,
                                    const std::string& name, const SolverConfig& cfg) {
  named.validate();
  named.require_types_of(f);
  const auto t0 = Clock::now();
  const auto g = per_type_genome(f, {0, 0, 0, 0});
  BaselineResult r{name, selection_fitness(f, named, g, cfg), cfg.num_reads, 0};
  r.wallclock_ms = ms_since(t0);
  return r;
}

RandomGuessResult baseline_random_guess(const Formula& f, std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw InvalidInput("random guessing needs at least one trial");
  const auto t0 = Clock::now();
  Rng rng(seed);
  Assignment x(f.num_vars());
  RandomGuessResult r;
  r.trials = trials;
  long double sum = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    for (std::size_t i = 0; i < x.size(); i += 64) {
      const std::uint64_t bits = rng.next();
      for (std::size_t b = 0; b < 64 && i + b < x.size(); ++b) x[i + b] = (bits >> b) & 1U;
    }
    const std::size_t sat = count_satisfied(f, x);
    r.best_satisfied = std::max(r.best_satisfied, sat);
    sum += static_cast<long double>(sat) / static_cast<long double>(f.num_clauses());
  }
  r.mean_fraction = static_cast<double>(sum / static_cast<long double>(trials));
  r.wallclock_ms = ms_since(t0);
  return r;
}

}  // namespace patqubo
