#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "patqubo/evolution.hpp"
#include "patqubo/pattern_library.hpp"
#include "patqubo/qubo.hpp"
#include "patqubo/sat.hpp"
#include "patqubo/solver.hpp"

namespace patqubo {

/// Per-clause pattern indices: clause k uses lib.set(type_k)[genome[k]].
using SelectionGenome = std::vector<int>;

/// Formula variable i sits at index i, the auxiliary of clause k at n + k.
struct AssembledQubo {
  QuboMatrix matrix;
  std::size_t num_vars = 0;
  std::size_t num_clauses = 0;

  std::size_t aux_index(std::size_t clause) const { return num_vars + clause; }
};

AssembledQubo assemble(const Formula& f, const PatternLibrary& lib, std::span<const int> genome);

/// Same pattern index for every clause of a type (per-type choice).
SelectionGenome per_type_genome(const Formula& f, const std::array<int, 4>& choice);

/// Alphabet at locus k is |S_{type of clause k}|.
GenomeSpec selection_genome_spec(const Formula& f, const PatternLibrary& lib);

/// Max count_satisfied over cfg.num_reads tabu reads on the assembled QUBO,
/// each decoded by dropping the auxiliaries.
std::size_t best_satisfied_over_reads(const Formula& f, const AssembledQubo& assembled,
                                      const SolverConfig& cfg);

std::size_t selection_fitness(const Formula& f, const PatternLibrary& lib,
                              std::span<const int> genome, const SolverConfig& cfg);

struct SelectionResult {
  SelectionGenome best_genome;
  std::size_t best_satisfied = 0;
  EvalLog log;
  std::size_t evaluations = 0;
  std::size_t solver_reads = 0;
};

/// Evolves per-clause pattern choices, maximizing selection_fitness.
/// solver_cfg.seed is replaced per evaluation by the engine's stream.
SelectionResult evolve_selection(const Formula& f, const PatternLibrary& lib, EAParams params,
                                 const SolverConfig& solver_cfg);

struct BaselineResult {
  std::string method;
  std::size_t best_satisfied = 0;
  std::size_t reads = 0;
  std::int64_t wallclock_ms = 0;
};

/// One random pattern per clause type, shared by all clauses of that type.
BaselineResult baseline_fixed_random(const Formula& f, const PatternLibrary& lib,
                                     const SolverConfig& cfg, std::uint64_t seed);

/// An independent random pattern per clause.
BaselineResult baseline_individual_random(const Formula& f, const PatternLibrary& lib,
                                          const SolverConfig& cfg, std::uint64_t seed);

/// Fixed per-type patterns from a named library (index 0 of each type).
BaselineResult baseline_named_fixed(const Formula& f, const PatternLibrary& named,
                                    const std::string& name, const SolverConfig& cfg);

struct RandomGuessResult {
  std::size_t best_satisfied = 0;
  std::size_t trials = 0;
  /// Mean satisfied fraction over all trials.
  double mean_fraction = 0.0;
  std::int64_t wallclock_ms = 0;
};

/// Uniform random assignments, no QUBO involved.
RandomGuessResult baseline_random_guess(const Formula& f, std::size_t trials, std::uint64_t seed);

}  // namespace patqubo
