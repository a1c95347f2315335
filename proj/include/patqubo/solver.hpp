#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "patqubo/qubo.hpp"

namespace patqubo {

/// Row-wise adjacency of a QuboMatrix for fast local-field updates.
class SparseQubo {
 public:
  explicit SparseQubo(const QuboMatrix& q);

  std::size_t dim() const { return linear_.size(); }
  Coefficient linear(std::size_t i) const { return linear_[i]; }
  std::span<const std::pair<std::size_t, Coefficient>> neighbors(std::size_t i) const {
    return {adj_.data() + offsets_[i], adj_.data() + offsets_[i + 1]};
  }

  Energy energy(std::span<const std::uint8_t> x) const;

  /// Q_ii + sum_j Q_ij x_j for every i; flipping i changes the energy by
  /// (1 - 2 x_i) * field_i.
  std::vector<Energy> local_fields(std::span<const std::uint8_t> x) const;

 private:
  std::vector<Coefficient> linear_;
  std::vector<std::size_t> offsets_;
  std::vector<std::pair<std::size_t, Coefficient>> adj_;
};

struct SolverConfig {
  std::size_t num_reads = 1;
  std::int64_t timeout_ms = 150;
  /// Tabu iterations per read. Non-zero replaces the wall-clock timeout with a
  /// deterministic budget.
  std::uint64_t iteration_budget = 0;
  /// 0 selects min(20, dim / 4), at least 1.
  std::size_t tabu_tenure = 0;
  /// A read restarts from a random assignment after stagnation_factor * dim
  /// iterations without a new best.
  std::size_t stagnation_factor = 4;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  void validate() const;
};

struct SolveResult {
  Assignment best_assignment;
  Energy best_energy = 0;
  std::size_t reads_used = 0;
  std::int64_t wallclock_ms = 0;
};

/// One multistart tabu read (read_index selects the random stream).
SolveResult tabu_read(const SparseQubo& q, const SolverConfig& cfg, std::size_t read_index);

/// Best of cfg.num_reads tabu reads; ties go to the lower read index.
SolveResult tabu_search(const QuboMatrix& q, const SolverConfig& cfg);
SolveResult tabu_search(const SparseQubo& q, const SolverConfig& cfg);

inline constexpr std::size_t kExactSolveCap = 24;

/// Exhaustive minimum with the lexicographically first minimizer.
///
/// Variables that share no coefficient with each other are set analytically
/// (to 1 only when that strictly lowers the energy); only the remaining
/// variables are enumerated, and their number must not exceed `cap`.
SolveResult exact_solve(const QuboMatrix& q, std::size_t cap = kExactSolveCap);

/// Applies the best strictly improving single flip (lowest index on ties)
/// until none is left.
Assignment greedy_descent(const QuboMatrix& q, Assignment x0);

}  // namespace patqubo
