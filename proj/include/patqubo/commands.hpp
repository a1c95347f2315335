#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "patqubo/evolution.hpp"
#include "patqubo/pattern.hpp"
#include "patqubo/pattern_library.hpp"
#include "patqubo/pattern_search.hpp"
#include "patqubo/sat.hpp"
#include "patqubo/solver.hpp"

namespace patqubo::commands {

namespace fs = std::filesystem;

struct FormulaPreset {
  std::string name;
  std::size_t count;
  Var num_vars;
  std::size_t num_clauses;
};

/// "uniform-500" (100 x 145 vars / 500 clauses) and "uniform-1000"
/// (50 x 298 vars / 1000 clauses, uniform sampling).
std::optional<FormulaPreset> formula_preset(const std::string& name);

struct GenFormulasOptions {
  std::string preset;  // empty for custom sizes
  Var num_vars = 0;
  std::size_t num_clauses = 0;
  std::size_t count = 1;
  std::uint64_t seed = 0;
  fs::path out_dir;
};

std::vector<fs::path> gen_formulas(const GenFormulasOptions& opts);

struct EnumerateOptions {
  ValueRange range{-1, 1};
  FitnessCriteria criteria;
  std::uint64_t budget = 1'000'000'000;
  unsigned threads = 0;
  fs::path out_dir;
};

struct EnumerateSummary {
  PatternLibrary library;
  std::array<std::size_t, 4> counts{};
  /// Counts under the same criteria with uniformity dropped (empty when the
  /// criteria do not use uniformity).
  std::optional<std::array<std::size_t, 4>> counts_without_uniformity;
  fs::path library_path;
};

EnumerateSummary enumerate_patterns(const EnumerateOptions& opts);

struct SearchOptions {
  std::vector<ValueRange> ranges;
  FitnessCriteria criteria;
  EAParams params = small_range_preset();
  std::size_t runs = 1;
  fs::path out_dir;
};

/// One report per (range, run), in that order.
std::vector<SearchReport> search_patterns(const SearchOptions& opts);

struct BuildSolveOptions {
  fs::path formula;
  fs::path library;
  /// genome | first | fixed-random | individual-random | random | chancellor | nuesslein
  std::string policy = "first";
  fs::path genome_file;
  SolverConfig solver;
  bool exact = false;
  std::size_t guess_trials = 1000;
  std::uint64_t seed = 0;
  fs::path data_dir;
  fs::path qubo_out;
};

struct BuildSolveReport {
  std::string policy;
  std::size_t num_vars = 0;
  std::size_t num_clauses = 0;
  std::size_t dim = 0;
  std::optional<Energy> energy;  // absent for random guessing
  std::size_t satisfied = 0;
  bool exact = false;
};

BuildSolveReport build_and_solve(const BuildSolveOptions& opts);

struct BenchmarkOptions {
  fs::path dataset;
  fs::path library;
  std::vector<std::string> methods = {"ea", "chancellor", "fixed-random", "individual-random"};
  EAParams ea;
  SolverConfig solver;  // num_reads is N per EA fitness evaluation
  /// Reads for every baseline; 0 matches the EA's total solver reads.
  std::size_t baseline_reads = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  fs::path data_dir;
  fs::path out_dir;
  bool record_wallclock = true;
};

struct BenchmarkRow {
  std::string formula_id;
  std::string method;
  std::size_t best_satisfied = 0;
  std::size_t clauses = 0;
  std::size_t reads = 0;
  std::int64_t wallclock_ms = 0;
  std::uint64_t seed = 0;
};

/// `formula_id,method,best_satisfied,clauses,reads,wallclock_ms,seed`
void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows);

/// Runs every method on every `*.cnf` file of the dataset (sorted by name).
std::vector<BenchmarkRow> benchmark(const BenchmarkOptions& opts);

/// Reads a selection genome: whitespace-separated integers.
std::vector<int> read_genome(const fs::path& path);

Formula load_formula(const fs::path& path);

}  // namespace patqubo::commands
