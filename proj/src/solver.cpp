#include "patqubo/solver.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <sstream>

#include "patqubo/error.hpp"
#include "patqubo/parallel.hpp"
#include "patqubo/rng.hpp"

namespace patqubo {

SparseQubo::SparseQubo(const QuboMatrix& q)
    : linear_(q.dim(), 0), offsets_(q.dim() + 1, 0) {
  for (const auto& [ij, v] : q.entries()) {
    if (ij.first == ij.second) {
      linear_[ij.first] = v;
    } else {
      ++offsets_[ij.first + 1];
      ++offsets_[ij.second + 1];
    }
  }
  for (std::size_t i = 0; i < q.dim(); ++i) offsets_[i + 1] += offsets_[i];
  adj_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [ij, v] : q.entries()) {
    const auto [i, j] = ij;
    if (i == j) continue;
    adj_[fill[i]++] = {j, v};
    adj_[fill[j]++] = {i, v};
  }
}

Energy SparseQubo::energy(std::span<const std::uint8_t> x) const {
  if (x.size() != dim()) throw InvalidInput("assignment length does not match QUBO dim");
  Energy e = 0;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (!x[i]) continue;
    e = detail::checked_add(e, linear_[i]);
    for (const auto& [j, v] : neighbors(i)) {
      if (j > i && x[j]) e = detail::checked_add(e, v);
    }
  }
  return e;
}

std::vector<Energy> SparseQubo::local_fields(std::span<const std::uint8_t> x) const {
  std::vector<Energy> field(linear_.begin(), linear_.end());
  for (std::size_t i = 0; i < dim(); ++i) {
    for (const auto& [j, v] : neighbors(i)) {
      if (x[j]) field[i] += v;
    }
  }
  return field;
}

void SolverConfig::validate() const {
  if (num_reads < 1) throw InvalidInput("solver needs at least one read");
  if (iteration_budget == 0 && timeout_ms < 1)
    throw InvalidInput("solver needs a positive timeout or iteration budget");
  if (stagnation_factor < 1) throw InvalidInput("stagnation factor must be positive");
}

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t ms_since(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
}

std::size_t effective_tenure(const SolverConfig& cfg, std::size_t dim) {
  std::size_t tenure = cfg.tabu_tenure != 0 ? cfg.tabu_tenure : std::min<std::size_t>(20, dim / 4);
  tenure = std::max<std::size_t>(tenure, 1);
  return std::min(tenure, dim - 1);
}

// Single-flip tabu search state over one read.
class TabuWalk {
 public:
  TabuWalk(const SparseQubo& q, Rng& rng) : q_(q), rng_(rng), x_(q.dim()), tabu_until_(q.dim(), 0) {}

  void randomize() {
    for (auto& b : x_) b = static_cast<std::uint8_t>(rng_.below(2));
    field_ = q_.local_fields(x_);
    current_ = q_.energy(x_);
    std::fill(tabu_until_.begin(), tabu_until_.end(), 0);
  }

  Energy delta(std::size_t i) const { return x_[i] ? -field_[i] : field_[i]; }

  void flip(std::size_t k) {
    current_ += delta(k);
    const Energy sign = x_[k] ? -1 : 1;
    x_[k] ^= 1U;
    for (const auto& [j, v] : q_.neighbors(k)) field_[j] += sign * v;
  }

  // Best admissible move; aspiration admits tabu moves that beat `best`.
  std::size_t choose(std::uint64_t iter, Energy best) const {
    std::size_t pick = q_.dim();
    Energy pick_delta = std::numeric_limits<Energy>::max();
    for (std::size_t i = 0; i < q_.dim(); ++i) {
      const Energy d = delta(i);
      const bool admissible = tabu_until_[i] <= iter || current_ + d < best;
      if (admissible && d < pick_delta) {
        pick = i;
        pick_delta = d;
      }
    }
    return pick;
  }

  void make_tabu(std::size_t k, std::uint64_t until) { tabu_until_[k] = until; }

  Energy current() const { return current_; }
  const Assignment& assignment() const { return x_; }

 private:
  const SparseQubo& q_;
  Rng& rng_;
  Assignment x_;
  std::vector<Energy> field_;
  std::vector<std::uint64_t> tabu_until_;
  Energy current_ = 0;
};

}  // namespace

SolveResult tabu_read(const SparseQubo& q, const SolverConfig& cfg, std::size_t read_index) {
  cfg.validate();
  if (q.dim() < 1) throw InvalidInput("cannot solve an empty QUBO");
  const auto t0 = Clock::now();
  Rng rng(mix_seed(cfg.seed, read_index));
  const std::size_t dim = q.dim();
  const std::size_t tenure = effective_tenure(cfg, dim);
  const std::uint64_t stagnation_limit = static_cast<std::uint64_t>(cfg.stagnation_factor) * dim;

  TabuWalk walk(q, rng);
  walk.randomize();
  SolveResult result;
  result.best_assignment = walk.assignment();
  result.best_energy = walk.current();
  result.reads_used = 1;

  std::uint64_t since_improvement = 0;
  for (std::uint64_t iter = 1;; ++iter) {
    if (cfg.iteration_budget != 0) {
      if (iter > cfg.iteration_budget) break;
    } else if ((iter & 63U) == 0 && ms_since(t0) >= cfg.timeout_ms) {
      break;
    }

    const std::size_t k = walk.choose(iter, result.best_energy);
    if (k < dim) {
      walk.flip(k);
      walk.make_tabu(k, iter + tenure + 1);
    }
    if (walk.current() < result.best_energy) {
      result.best_energy = walk.current();
      result.best_assignment = walk.assignment();
      since_improvement = 0;
    } else if (++since_improvement >= stagnation_limit || k == dim) {
      walk.randomize();
      since_improvement = 0;
      if (walk.current() < result.best_energy) {
        result.best_energy = walk.current();
        result.best_assignment = walk.assignment();
      }
    }
  }
  result.wallclock_ms = ms_since(t0);
  return result;
}

SolveResult tabu_search(const SparseQubo& q, const SolverConfig& cfg) {
  cfg.validate();
  const auto t0 = Clock::now();
  std::vector<SolveResult> reads(cfg.num_reads);
  parallel_for(cfg.num_reads, cfg.threads, [&](std::size_t r) { reads[r] = tabu_read(q, cfg, r); });
  SolveResult best = reads.front();
  for (std::size_t r = 1; r < reads.size(); ++r) {
    if (reads[r].best_energy < best.best_energy) best = reads[r];
  }
  best.reads_used = cfg.num_reads;
  best.wallclock_ms = ms_since(t0);
  return best;
}

SolveResult tabu_search(const QuboMatrix& q, const SolverConfig& cfg) {
  return tabu_search(SparseQubo(q), cfg);
}

SolveResult exact_solve(const QuboMatrix& q, std::size_t cap) {
  const auto t0 = Clock::now();
  const SparseQubo sq(q);
  const std::size_t dim = sq.dim();

  // Greedily collect mutually non-interacting variables, highest index first.
  std::vector<bool> eliminated(dim, false);
  for (std::size_t i = dim; i-- > 0;) {
    bool independent = true;
    for (const auto& [j, v] : sq.neighbors(i)) {
      if (eliminated[j]) {
        independent = false;
        break;
      }
    }
    eliminated[i] = independent;
  }
  std::vector<std::size_t> free_vars;
  std::vector<std::size_t> fixed_vars;
  for (std::size_t i = 0; i < dim; ++i) (eliminated[i] ? fixed_vars : free_vars).push_back(i);
  if (free_vars.size() > cap) {
    std::ostringstream msg;
    msg << "exact solve needs to enumerate " << free_vars.size()
        << " variables, cap is " << cap;
    throw InfeasibleEnumeration(msg.str());
  }

  Assignment x(dim, 0);
  std::vector<Energy> field = sq.local_fields(x);
  Energy free_energy = 0;  // energy of the free variables alone

  auto flip_free = [&](std::size_t k) {
    const Energy d = x[k] ? -field[k] : field[k];
    const Energy sign = x[k] ? -1 : 1;
    x[k] ^= 1U;
    for (const auto& [j, v] : sq.neighbors(k)) field[j] += sign * v;
    // Fixed variables are all zero here, so d only involves free variables.
    free_energy += d;
  };

  auto completion = [&](Assignment& full) {
    Energy e = free_energy;
    for (std::size_t i : fixed_vars) {
      if (field[i] < 0) {
        full[i] = 1;
        e += field[i];
      } else {
        full[i] = 0;
      }
    }
    return e;
  };

  SolveResult best;
  best.best_assignment = x;
  best.best_energy = completion(best.best_assignment);
  Assignment candidate(dim);
  const std::uint64_t total = std::uint64_t{1} << free_vars.size();
  for (std::uint64_t step = 1; step < total; ++step) {
    for (std::size_t k = free_vars.size(); k-- > 0;) {
      flip_free(free_vars[k]);
      if (x[free_vars[k]]) break;
    }
    const Energy e = [&] {
      Energy v = free_energy;
      for (std::size_t i : fixed_vars) v += std::min<Energy>(field[i], 0);
      return v;
    }();
    if (e > best.best_energy) continue;
    candidate = x;
    completion(candidate);
    if (e < best.best_energy || candidate < best.best_assignment) {
      best.best_energy = e;
      best.best_assignment = candidate;
    }
  }
  best.best_energy = sq.energy(best.best_assignment);
  best.reads_used = 1;
  best.wallclock_ms = ms_since(t0);
  return best;
}

Assignment greedy_descent(const QuboMatrix& q, Assignment x) {
  const SparseQubo sq(q);
  if (x.size() != sq.dim()) throw InvalidInput("start assignment does not match QUBO dim");
  std::vector<Energy> field = sq.local_fields(x);
  while (true) {
    std::size_t pick = sq.dim();
    Energy pick_delta = 0;
    for (std::size_t i = 0; i < sq.dim(); ++i) {
      const Energy d = x[i] ? -field[i] : field[i];
      if (d < pick_delta) {
        pick = i;
        pick_delta = d;
      }
    }
    if (pick == sq.dim()) return x;
    const Energy sign = x[pick] ? -1 : 1;
    x[pick] ^= 1U;
    for (const auto& [j, v] : sq.neighbors(pick)) field[j] += sign * v;
  }
}

}  // namespace patqubo
