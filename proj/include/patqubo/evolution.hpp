#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "patqubo/rng.hpp"

namespace patqubo {

/// Fixed-length genome; locus i holds a value in [0, alphabet_size_at(i)).
using Genome = std::vector<int>;
using Fitness = std::int64_t;

enum class Direction { kMaximize, kMinimize };

struct GenomeSpec {
  std::vector<int> alphabet_sizes;

  /// Same alphabet at every locus.
  static GenomeSpec uniform(std::size_t length, int alphabet_size);

  std::size_t length() const { return alphabet_sizes.size(); }
  int alphabet_size_at(std::size_t locus) const { return alphabet_sizes[locus]; }
  bool accepts(const Genome& g) const;
  void validate() const;
};

struct EAParams {
  std::size_t pop_size = 100;
  double mut_rate = 0.5;
  double rec_rate = 0.5;
  double par_rate = 0.3;
  double elt_rate = 0.1;
  double mig_rate = 0.1;
  std::size_t generations = 10;
  std::size_t restarts = 1;
  std::uint64_t seed = 0;
  Direction direction = Direction::kMaximize;
  /// Worker threads (0 = hardware concurrency). Restarts run in parallel when
  /// there are several; otherwise fitness evaluations within a generation do.
  unsigned threads = 1;

  std::size_t elite_count() const;
  std::size_t offspring_target() const;
  std::size_t migrant_count() const;
  void validate() const;
};

struct Individual {
  Genome genome;
  Fitness fitness = 0;
};

struct GenerationRecord {
  std::size_t restart = 0;
  std::size_t generation = 0;
  Fitness best_fitness = 0;
  double mean_fitness = 0.0;
  std::size_t zero_count = 0;
  std::int64_t elapsed_ms = 0;
};

/// One record per evaluated generation; generation 0 is the initial population.
struct EvalLog {
  std::vector<GenerationRecord> records;

  /// `restart,generation,best_fitness,mean_fitness,zero_count`
  void write_csv(std::ostream& out) const;
};

/// Fitness of a genome. eval_seed is a per-evaluation seed drawn from the
/// engine's stream, for stochastic fitness functions. Must be safe to call
/// concurrently.
using FitnessFn = std::function<Fitness(const Genome&, std::uint64_t eval_seed)>;

/// Decides which evaluated individuals a run keeps in RunResult::collected.
using CollectFn = std::function<bool(const Individual&)>;

Genome random_genome(const GenomeSpec& spec, Rng& rng);

/// Resamples one uniformly chosen locus from its alphabet.
Genome one_point_mutate(const Genome& g, const GenomeSpec& spec, Rng& rng);

/// p1[0..j] ++ p2[j+1..), j uniform in [0, length).
Genome one_point_crossover(const Genome& p1, const Genome& p2, Rng& rng);
Genome one_point_crossover_at(const Genome& p1, const Genome& p2, std::size_t j);

/// Draws n individuals without replacement, each draw proportional to
/// (score - min score of the remaining + 1).
std::vector<Individual> roulette_select(std::vector<Individual> pool, std::size_t n,
                                        Direction direction, Rng& rng);

/// True if a is strictly better than b under direction.
bool better(Fitness a, Fitness b, Direction direction);

struct StepResult {
  std::vector<Individual> population;
  /// Every individual evaluated during the step, in evaluation order.
  std::vector<Individual> evaluated;
};

/// One generation: variation (crossover until the population grew by
/// par_rate, then mutation of offspring and non-elites), migration (random
/// immigrants replace the worst non-elites), selection (elites plus
/// roulette over the rest).
StepResult step(std::vector<Individual> population, const GenomeSpec& spec,
                const EAParams& params, const FitnessFn& fitness_fn, Rng& rng,
                unsigned eval_threads = 1);

struct CollectedIndividual {
  Individual individual;
  std::size_t restart = 0;
  std::size_t generation = 0;
};

struct RunResult {
  EvalLog log;
  std::vector<CollectedIndividual> collected;
  CollectedIndividual best;
  std::size_t evaluations = 0;
  std::size_t steps = 0;
};

/// `restarts` independent runs of `generations` steps from fresh random
/// populations. Deterministic in params.seed regardless of thread count.
RunResult run(const GenomeSpec& spec, const EAParams& params, const FitnessFn& fitness_fn,
              const CollectFn& collect = nullptr);

}  // namespace patqubo
