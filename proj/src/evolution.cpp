#include "patqubo/evolution.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>

#include "patqubo/error.hpp"
#include "patqubo/parallel.hpp"

namespace patqubo {

GenomeSpec GenomeSpec::uniform(std::size_t length, int alphabet_size) {
  return GenomeSpec{std::vector<int>(length, alphabet_size)};
}

bool GenomeSpec::accepts(const Genome& g) const {
  if (g.size() != length()) return false;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] < 0 || g[i] >= alphabet_sizes[i]) return false;
  }
  return true;
}

void GenomeSpec::validate() const {
  if (alphabet_sizes.empty()) throw InvalidInput("genome length must be positive");
  for (int a : alphabet_sizes) {
    if (a < 1) throw InvalidInput("every locus needs a non-empty alphabet");
  }
}

std::size_t EAParams::elite_count() const {
  return static_cast<std::size_t>(std::floor(static_cast<double>(pop_size) * elt_rate));
}

std::size_t EAParams::offspring_target() const {
  return static_cast<std::size_t>(std::floor(static_cast<double>(pop_size) * par_rate));
}

std::size_t EAParams::migrant_count() const {
  return static_cast<std::size_t>(std::floor(static_cast<double>(pop_size) * mig_rate));
}

void EAParams::validate() const {
  auto unit = [](double r, const char* name, bool closed) {
    if (!(r >= 0.0 && (closed ? r <= 1.0 : r < 1.0)))
      throw InvalidInput(std::string(name) + " must lie in [0, 1" + (closed ? "]" : ")"));
  };
  if (pop_size < 1) throw InvalidInput("population size must be positive");
  if (restarts < 1) throw InvalidInput("restarts must be positive");
  unit(mut_rate, "mut_rate", true);
  unit(rec_rate, "rec_rate", true);
  unit(par_rate, "par_rate", false);
  unit(elt_rate, "elt_rate", true);
  unit(mig_rate, "mig_rate", false);
  if (elite_count() >= pop_size && pop_size > 1)
    throw InvalidInput("elite count must be smaller than the population");
}

void EvalLog::write_csv(std::ostream& out) const {
  out << "restart,generation,best_fitness,mean_fitness,zero_count\n";
  for (const auto& r : records) {
    std::ostringstream mean;
    mean << std::fixed << std::setprecision(6) << r.mean_fitness;
    out << r.restart << ',' << r.generation << ',' << r.best_fitness << ',' << mean.str() << ','
        << r.zero_count << '\n';
  }
}

Genome random_genome(const GenomeSpec& spec, Rng& rng) {
  Genome g(spec.length());
  for (std::size_t i = 0; i < g.size(); ++i)
    g[i] = static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.alphabet_sizes[i])));
  return g;
}

Genome one_point_mutate(const Genome& g, const GenomeSpec& spec, Rng& rng) {
  if (g.size() != spec.length()) throw InvalidInput("genome does not match its spec");
  Genome out = g;
  const std::size_t locus = rng.below(out.size());
  out[locus] = static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.alphabet_sizes[locus])));
  return out;
}

Genome one_point_crossover_at(const Genome& p1, const Genome& p2, std::size_t j) {
  if (p1.size() != p2.size()) throw InvalidInput("crossover parents differ in length");
  if (j >= p1.size()) throw InvalidInput("crossover point out of range");
  Genome out(p2);
  std::copy(p1.begin(), p1.begin() + static_cast<std::ptrdiff_t>(j + 1), out.begin());
  return out;
}

Genome one_point_crossover(const Genome& p1, const Genome& p2, Rng& rng) {
  if (p1.size() != p2.size()) throw InvalidInput("crossover parents differ in length");
  if (p1.empty()) return p1;
  return one_point_crossover_at(p1, p2, rng.below(p1.size()));
}

bool better(Fitness a, Fitness b, Direction direction) {
  return direction == Direction::kMaximize ? a > b : a < b;
}

namespace {

// Orientation-free score: larger is better.
Fitness score(Fitness f, Direction d) { return d == Direction::kMaximize ? f : -f; }

// Indices ordered best first; ties keep the lower index first.
std::vector<std::size_t> rank(const std::vector<Individual>& pop, Direction d) {
  std::vector<std::size_t> order(pop.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return score(pop[a].fitness, d) > score(pop[b].fitness, d);
  });
  return order;
}

void evaluate(std::vector<Individual>& pop, const std::vector<std::size_t>& which,
              const FitnessFn& fitness_fn, Rng& rng, unsigned threads) {
  std::vector<std::uint64_t> seeds(which.size());
  for (auto& s : seeds) s = rng.next();
  parallel_for(which.size(), threads, [&](std::size_t k) {
    Individual& ind = pop[which[k]];
    ind.fitness = fitness_fn(ind.genome, seeds[k]);
  });
}

}  // namespace

std::vector<Individual> roulette_select(std::vector<Individual> pool, std::size_t n,
                                        Direction direction, Rng& rng) {
  if (n > pool.size()) throw InvalidInput("cannot select more individuals than available");
  constexpr std::uint64_t kWeightCap = std::uint64_t{1} << 48;
  std::vector<Individual> chosen;
  chosen.reserve(n);
  std::vector<std::uint64_t> weights;
  while (chosen.size() < n) {
    Fitness lowest = score(pool.front().fitness, direction);
    for (const auto& ind : pool) lowest = std::min(lowest, score(ind.fitness, direction));
    weights.resize(pool.size());
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const auto shifted = static_cast<std::uint64_t>(score(pool[i].fitness, direction) - lowest);
      weights[i] = std::min(shifted, kWeightCap) + 1;
      total += weights[i];
    }
    std::uint64_t ticket = rng.below(total);
    std::size_t pick = 0;
    while (ticket >= weights[pick]) ticket -= weights[pick++];
    chosen.push_back(std::move(pool[pick]));
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return chosen;
}

StepResult step(std::vector<Individual> population, const GenomeSpec& spec,
                const EAParams& params, const FitnessFn& fitness_fn, Rng& rng,
                unsigned eval_threads) {
  const std::size_t n = population.size();
  if (n != params.pop_size) throw InvalidInput("population size does not match parameters");
  const Direction dir = params.direction;
  const std::size_t elites = std::min(params.elite_count(), n);

  std::vector<bool> is_elite(n, false);
  {
    const auto order = rank(population, dir);
    for (std::size_t k = 0; k < elites; ++k) is_elite[order[k]] = true;
  }

  // Variation: crossover offspring from parent pairs sampled without
  // replacement within each pass.
  std::vector<Individual> offspring;
  const std::size_t target = params.offspring_target();
  if (params.rec_rate > 0.0 && n >= 2) {
    std::vector<std::size_t> perm(n);
    while (offspring.size() < target) {
      std::iota(perm.begin(), perm.end(), 0);
      for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
      for (std::size_t i = 0; i + 1 < n && offspring.size() < target; i += 2) {
        if (!rng.bernoulli(params.rec_rate)) continue;
        offspring.push_back(
            {one_point_crossover(population[perm[i]].genome, population[perm[i + 1]].genome, rng),
             0});
      }
    }
  }

  std::vector<Individual> pool = std::move(population);
  std::vector<std::size_t> dirty;
  for (std::size_t i = 0; i < n; ++i) {
    if (is_elite[i] || !rng.bernoulli(params.mut_rate)) continue;
    pool[i].genome = one_point_mutate(pool[i].genome, spec, rng);
    dirty.push_back(i);
  }
  for (auto& child : offspring) {
    if (rng.bernoulli(params.mut_rate)) child.genome = one_point_mutate(child.genome, spec, rng);
    dirty.push_back(pool.size());
    pool.push_back(std::move(child));
    is_elite.push_back(false);
  }
  std::sort(dirty.begin(), dirty.end());
  evaluate(pool, dirty, fitness_fn, rng, eval_threads);

  StepResult result;
  for (std::size_t i : dirty) result.evaluated.push_back(pool[i]);

  // Migration: the worst non-elites make room for random immigrants.
  const std::size_t migrants = params.migrant_count();
  if (migrants > 0) {
    auto order = rank(pool, dir);
    std::vector<std::size_t> replace;
    for (auto it = order.rbegin(); it != order.rend() && replace.size() < migrants; ++it) {
      if (!is_elite[*it]) replace.push_back(*it);
    }
    std::sort(replace.begin(), replace.end());
    for (std::size_t i : replace) pool[i].genome = random_genome(spec, rng);
    evaluate(pool, replace, fitness_fn, rng, eval_threads);
    for (std::size_t i : replace) result.evaluated.push_back(pool[i]);
  }

  // Selection: elites verbatim, the rest by roulette over everything else.
  result.population.reserve(n);
  std::vector<Individual> rest;
  rest.reserve(pool.size() - elites);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (is_elite[i])
      result.population.push_back(pool[i]);
    else
      rest.push_back(pool[i]);
  }
  auto chosen = roulette_select(std::move(rest), n - elites, dir, rng);
  for (auto& c : chosen) result.population.push_back(std::move(c));
  return result;
}

namespace {

GenerationRecord summarize(const std::vector<Individual>& pop, Direction dir, std::size_t restart,
                           std::size_t generation, std::int64_t elapsed_ms) {
  GenerationRecord r;
  r.restart = restart;
  r.generation = generation;
  r.best_fitness = pop.front().fitness;
  long double sum = 0;
  for (const auto& ind : pop) {
    if (better(ind.fitness, r.best_fitness, dir)) r.best_fitness = ind.fitness;
    sum += ind.fitness;
    r.zero_count += ind.fitness == 0 ? 1 : 0;
  }
  r.mean_fitness = static_cast<double>(sum / static_cast<long double>(pop.size()));
  r.elapsed_ms = elapsed_ms;
  return r;
}

struct RestartOutcome {
  std::vector<GenerationRecord> records;
  std::vector<CollectedIndividual> collected;
  CollectedIndividual best;
  bool has_best = false;
  std::size_t evaluations = 0;
};

}  // namespace

RunResult run(const GenomeSpec& spec, const EAParams& params, const FitnessFn& fitness_fn,
              const CollectFn& collect) {
  spec.validate();
  params.validate();
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                 start)
        .count();
  };

  const unsigned threads = resolve_threads(params.threads);
  const bool parallel_restarts = params.restarts > 1 && threads > 1;
  const unsigned eval_threads = parallel_restarts ? 1 : threads;

  std::vector<RestartOutcome> outcomes(params.restarts);
  parallel_for(params.restarts, parallel_restarts ? threads : 1, [&](std::size_t r) {
    RestartOutcome& out = outcomes[r];
    Rng rng(mix_seed(params.seed, r + 1));

    auto absorb = [&](const std::vector<Individual>& evaluated, std::size_t generation) {
      out.evaluations += evaluated.size();
      for (const auto& ind : evaluated) {
        if (!out.has_best || better(ind.fitness, out.best.individual.fitness, params.direction)) {
          out.best = {ind, r, generation};
          out.has_best = true;
        }
        if (collect && collect(ind)) out.collected.push_back({ind, r, generation});
      }
    };

    std::vector<Individual> pop(params.pop_size);
    std::vector<std::size_t> all(params.pop_size);
    for (std::size_t i = 0; i < pop.size(); ++i) {
      pop[i].genome = random_genome(spec, rng);
      all[i] = i;
    }
    evaluate(pop, all, fitness_fn, rng, eval_threads);
    absorb(pop, 0);
    out.records.push_back(summarize(pop, params.direction, r, 0, elapsed()));

    for (std::size_t g = 1; g <= params.generations; ++g) {
      StepResult s = step(std::move(pop), spec, params, fitness_fn, rng, eval_threads);
      pop = std::move(s.population);
      absorb(s.evaluated, g);
      out.records.push_back(summarize(pop, params.direction, r, g, elapsed()));
    }
  });

  RunResult result;
  bool has_best = false;
  for (auto& out : outcomes) {
    result.log.records.insert(result.log.records.end(), out.records.begin(), out.records.end());
    result.collected.insert(result.collected.end(), std::make_move_iterator(out.collected.begin()),
                            std::make_move_iterator(out.collected.end()));
    result.evaluations += out.evaluations;
    if (out.has_best &&
        (!has_best || better(out.best.individual.fitness, result.best.individual.fitness,
                             params.direction))) {
      result.best = out.best;
      has_best = true;
    }
  }
  result.steps = params.restarts * params.generations;
  return result;
}

}  // namespace patqubo
