#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "patqubo/error.hpp"
#include "patqubo/evolution.hpp"
#include "patqubo/rng.hpp"

using namespace patqubo;

namespace {

Fitness sum_fitness(const Genome& g, std::uint64_t) {
  return std::accumulate(g.begin(), g.end(), Fitness{0});
}

std::vector<Individual> evaluated_population(const GenomeSpec& spec, std::size_t n, Rng& rng) {
  std::vector<Individual> pop(n);
  for (auto& ind : pop) {
    ind.genome = random_genome(spec, rng);
    ind.fitness = sum_fitness(ind.genome, 0);
  }
  return pop;
}

std::multiset<Genome> genomes(const std::vector<Individual>& pop) {
  std::multiset<Genome> out;
  for (const auto& ind : pop) out.insert(ind.genome);
  return out;
}

}  // namespace

TEST(Mutate, SingleValuedAlphabetIsFixedPoint) {
  Rng rng(1);
  const auto spec = GenomeSpec::uniform(5, 1);
  const Genome g(5, 0);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(one_point_mutate(g, spec, rng), g);
}

TEST(Mutate, ChangesAtMostOneLocusWithinAlphabet) {
  Rng rng(2);
  const auto spec = GenomeSpec::uniform(10, 3);
  for (int i = 0; i < 1000; ++i) {
    const Genome g = random_genome(spec, rng);
    const Genome m = one_point_mutate(g, spec, rng);
    ASSERT_TRUE(spec.accepts(m));
    std::size_t diff = 0;
    for (std::size_t k = 0; k < g.size(); ++k) diff += g[k] != m[k] ? 1 : 0;
    ASSERT_LE(diff, 1u);
  }
}

TEST(Mutate, LengthOneGenomeUsesLocusZero) {
  Rng rng(3);
  const GenomeSpec spec{{4}};
  std::set<int> seen;
  for (int i = 0; i < 200; ++i) seen.insert(one_point_mutate({0}, spec, rng)[0]);
  EXPECT_EQ(seen, (std::set<int>{0, 1, 2, 3}));
}

TEST(Mutate, PerLocusAlphabets) {
  Rng rng(4);
  const GenomeSpec spec{{1, 6, 2, 7}};
  for (int i = 0; i < 500; ++i) ASSERT_TRUE(spec.accepts(one_point_mutate(random_genome(spec, rng), spec, rng)));
}

TEST(Crossover, BoundaryCuts) {
  const Genome p1 = {1, 2, 3, 4};
  const Genome p2 = {5, 6, 7, 8};
  EXPECT_EQ(one_point_crossover_at(p1, p2, 3), p1);
  EXPECT_EQ(one_point_crossover_at(p1, p2, 0), (Genome{1, 6, 7, 8}));
  EXPECT_EQ(one_point_crossover_at(p1, p2, 1), (Genome{1, 2, 7, 8}));
  EXPECT_THROW(one_point_crossover_at(p1, p2, 4), InvalidInput);
  EXPECT_THROW(one_point_crossover_at(p1, {1}, 0), InvalidInput);
}

TEST(Crossover, IdenticalParents) {
  Rng rng(5);
  const Genome p = {3, 1, 4, 1, 5};
  for (int i = 0; i < 20; ++i) EXPECT_EQ(one_point_crossover(p, p, rng), p);
}

TEST(Roulette, WholePopulationAndTooMany) {
  Rng rng(6);
  std::vector<Individual> pool = {{{0}, 5}, {{1}, 1}, {{2}, -3}};
  auto all = roulette_select(pool, 3, Direction::kMaximize, rng);
  EXPECT_EQ(genomes(all), genomes(pool));
  EXPECT_THROW(roulette_select(pool, 4, Direction::kMaximize, rng), InvalidInput);
}

TEST(Roulette, ThreeToOneFirstPick) {
  Rng rng(7);
  // Shifted scores: fitness - min + 1 gives 3 and 1.
  const std::vector<Individual> pool = {{{0}, 2}, {{1}, 0}};
  const int trials = 100000;
  int first = 0;
  for (int i = 0; i < trials; ++i)
    first += roulette_select(pool, 1, Direction::kMaximize, rng)[0].genome[0] == 0 ? 1 : 0;
  EXPECT_NEAR(static_cast<double>(first) / trials, 0.75, 0.005);
}

TEST(Roulette, MinimizeFavoursLowFitness) {
  Rng rng(8);
  const std::vector<Individual> pool = {{{0}, 0}, {{1}, 2}};
  int first = 0;
  for (int i = 0; i < 100000; ++i)
    first += roulette_select(pool, 1, Direction::kMinimize, rng)[0].genome[0] == 0 ? 1 : 0;
  EXPECT_NEAR(first / 100000.0, 0.75, 0.005);
}

TEST(Roulette, EqualFitnessIsUniformWithoutReplacement) {
  Rng rng(9);
  std::vector<Individual> pool;
  for (int i = 0; i < 4; ++i) pool.push_back({{i}, 7});
  std::map<int, int> counts;
  for (int i = 0; i < 40000; ++i) {
    const auto pick = roulette_select(pool, 2, Direction::kMaximize, rng);
    ASSERT_NE(pick[0].genome, pick[1].genome);
    counts[pick[0].genome[0]]++;
  }
  for (const auto& [k, c] : counts) EXPECT_NEAR(c / 40000.0, 0.25, 0.01);
}

TEST(Roulette, HugeFitnessSpreadDoesNotOverflow) {
  Rng rng(10);
  const std::vector<Individual> pool = {{{0}, INT64_MAX / 2}, {{1}, -(INT64_MAX / 2)}, {{2}, 0}};
  EXPECT_NO_THROW(roulette_select(pool, 2, Direction::kMaximize, rng));
}

TEST(Step, AllVariationDisabledKeepsPopulation) {
  Rng rng(11);
  const auto spec = GenomeSpec::uniform(6, 4);
  EAParams p;
  p.pop_size = 20;
  p.mut_rate = 0;
  p.rec_rate = 0;
  p.mig_rate = 0;
  p.elt_rate = 0.95;
  const auto pop = evaluated_population(spec, 20, rng);
  const auto r = step(pop, spec, p, sum_fitness, rng);
  EXPECT_EQ(genomes(r.population), genomes(pop));
  EXPECT_TRUE(r.evaluated.empty());
}

TEST(Step, ElitesSurviveVerbatim) {
  Rng rng(12);
  const auto spec = GenomeSpec::uniform(10, 3);
  EAParams p;
  p.pop_size = 100;
  ASSERT_EQ(p.elite_count(), 10u);
  for (int trial = 0; trial < 20; ++trial) {
    auto pop = evaluated_population(spec, 100, rng);
    auto sorted = pop;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Individual& a, const Individual& b) { return a.fitness > b.fitness; });
    const auto r = step(pop, spec, p, sum_fitness, rng);
    ASSERT_EQ(r.population.size(), 100u);
    const auto after = genomes(r.population);
    for (std::size_t k = 0; k < 10; ++k) EXPECT_TRUE(after.count(sorted[k].genome) > 0);
    Fitness best_before = sorted[0].fitness;
    Fitness best_after = r.population[0].fitness;
    for (const auto& ind : r.population) best_after = std::max(best_after, ind.fitness);
    EXPECT_GE(best_after, best_before);
    for (const auto& ind : r.population) {
      EXPECT_TRUE(spec.accepts(ind.genome));
      EXPECT_EQ(ind.fitness, sum_fitness(ind.genome, 0));
    }
  }
}

TEST(Step, PopulationSizeMismatchThrows) {
  Rng rng(13);
  const auto spec = GenomeSpec::uniform(3, 2);
  EAParams p;
  p.pop_size = 5;
  EXPECT_THROW(step(evaluated_population(spec, 4, rng), spec, p, sum_fitness, rng), InvalidInput);
}

TEST(Params, Validation) {
  EAParams p;
  EXPECT_NO_THROW(p.validate());
  p.mut_rate = 1.5;
  EXPECT_THROW(p.validate(), InvalidInput);
  p = {};
  p.pop_size = 0;
  EXPECT_THROW(p.validate(), InvalidInput);
  p = {};
  p.elt_rate = 1.0;
  EXPECT_THROW(p.validate(), InvalidInput);
  p = {};
  p.restarts = 0;
  EXPECT_THROW(p.validate(), InvalidInput);
}

TEST(Run, TotalGenerationCounts) {
  const auto spec = GenomeSpec::uniform(4, 2);
  EAParams p;
  p.pop_size = 10;
  p.restarts = 50;
  p.generations = 10;
  const auto r = run(spec, p, sum_fitness);
  EXPECT_EQ(r.steps, 500u);
  EXPECT_EQ(r.log.records.size(), 50u * 11u);
}

TEST(Run, ZeroGenerationsEvaluatesOnce) {
  const auto spec = GenomeSpec::uniform(4, 3);
  EAParams p;
  p.pop_size = 12;
  p.generations = 0;
  std::size_t calls = 0;
  const auto r = run(spec, p, [&](const Genome& g, std::uint64_t s) {
    ++calls;
    return sum_fitness(g, s);
  });
  EXPECT_EQ(calls, 12u);
  EXPECT_EQ(r.evaluations, 12u);
  EXPECT_EQ(r.steps, 0u);
  ASSERT_EQ(r.log.records.size(), 1u);
}

TEST(Run, BestHistoryMonotoneWithElitism) {
  const auto spec = GenomeSpec::uniform(30, 5);
  EAParams p;
  p.pop_size = 40;
  p.generations = 40;
  p.restarts = 3;
  p.seed = 99;
  const auto r = run(spec, p, sum_fitness);
  for (std::size_t i = 1; i < r.log.records.size(); ++i) {
    const auto& a = r.log.records[i - 1];
    const auto& b = r.log.records[i];
    if (a.restart == b.restart) EXPECT_GE(b.best_fitness, a.best_fitness);
  }
  EXPECT_GT(r.best.individual.fitness, 30 * 2);
}

TEST(Run, MinimizeDirection) {
  const auto spec = GenomeSpec::uniform(10, 4);
  EAParams p;
  p.pop_size = 30;
  p.generations = 30;
  p.direction = Direction::kMinimize;
  const auto r = run(spec, p, sum_fitness);
  for (std::size_t i = 1; i < r.log.records.size(); ++i)
    EXPECT_LE(r.log.records[i].best_fitness, r.log.records[i - 1].best_fitness);
  EXPECT_LE(r.best.individual.fitness, 3);
}

TEST(Run, DeterministicAcrossThreadCounts) {
  const auto spec = GenomeSpec::uniform(8, 3);
  EAParams p;
  p.pop_size = 16;
  p.generations = 8;
  p.restarts = 4;
  p.seed = 5;
  auto noisy = [](const Genome& g, std::uint64_t s) { return sum_fitness(g, s) + static_cast<Fitness>(s % 3); };
  auto csv = [&](unsigned threads) {
    p.threads = threads;
    std::ostringstream out;
    run(spec, p, noisy).log.write_csv(out);
    return out.str();
  };
  const std::string one = csv(1);
  EXPECT_EQ(one, csv(1));
  EXPECT_EQ(one, csv(4));
  p.restarts = 1;
  EXPECT_EQ(csv(1), csv(3));
}

TEST(Run, CollectsMatchingIndividuals) {
  const auto spec = GenomeSpec::uniform(3, 2);
  EAParams p;
  p.pop_size = 10;
  p.generations = 5;
  const auto r = run(spec, p, sum_fitness, [](const Individual& ind) { return ind.fitness == 3; });
  for (const auto& c : r.collected) EXPECT_EQ(c.individual.genome, (Genome{1, 1, 1}));
  EXPECT_FALSE(r.collected.empty());
}

TEST(EvalLogCsv, Format) {
  EvalLog log;
  log.records.push_back({0, 0, -4, -10.5, 2, 17});
  std::ostringstream out;
  log.write_csv(out);
  EXPECT_EQ(out.str(), "restart,generation,best_fitness,mean_fitness,zero_count\n0,0,-4,-10.500000,2\n");
}
