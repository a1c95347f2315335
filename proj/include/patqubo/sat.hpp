#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "patqubo/qubo.hpp"

namespace patqubo {

using Var = std::uint32_t;

struct Literal {
  Var var = 0;
  bool negated = false;

  /// Truth value of the literal under x.
  bool eval(std::span<const std::uint8_t> x) const { return (x[var] != 0) != negated; }

  friend bool operator==(const Literal&, const Literal&) = default;
};

/// Number of negated literals in a 3-literal clause.
enum class ClauseType : std::uint8_t { kType0 = 0, kType1 = 1, kType2 = 2, kType3 = 3 };

inline constexpr std::array<ClauseType, 4> kAllClauseTypes = {
    ClauseType::kType0, ClauseType::kType1, ClauseType::kType2, ClauseType::kType3};

constexpr std::size_t index_of(ClauseType t) { return static_cast<std::size_t>(t); }
ClauseType clause_type_from_index(int t);

/// Disjunction of exactly three literals over pairwise distinct variables.
class Clause {
 public:
  /// Throws InvalidClause if two literals share a variable.
  Clause(Literal a, Literal b, Literal c);

  const std::array<Literal, 3>& literals() const { return lits_; }
  const Literal& operator[](std::size_t i) const { return lits_[i]; }

  bool satisfied_by(std::span<const std::uint8_t> x) const {
    return lits_[0].eval(x) || lits_[1].eval(x) || lits_[2].eval(x);
  }

  friend bool operator==(const Clause&, const Clause&) = default;

 private:
  std::array<Literal, 3> lits_;
};

/// A 3-CNF formula with at least one clause.
class Formula {
 public:
  /// Throws InvalidInput if a literal references a variable >= num_vars or
  /// the clause list is empty.
  Formula(Var num_vars, std::vector<Clause> clauses);

  Var num_vars() const { return num_vars_; }
  std::size_t num_clauses() const { return clauses_.size(); }
  const std::vector<Clause>& clauses() const { return clauses_; }

  friend bool operator==(const Formula&, const Formula&) = default;

 private:
  Var num_vars_;
  std::vector<Clause> clauses_;
};

ClauseType clause_type(const Clause& c);

/// Positive literals first, then negated ones; each group keeps its order.
Clause sort_clause(const Clause& c);

/// Clauses with at least one true literal. x may be longer than num_vars
/// (trailing auxiliaries are ignored).
std::size_t count_satisfied(const Formula& f, std::span<const std::uint8_t> x);

struct MaxSatResult {
  std::size_t satisfied = 0;
  Assignment witness;
};

inline constexpr Var kMaxSatBruteforceCap = 24;

/// Exhaustive MAX-SAT. Among maximizers, returns the first assignment in
/// lexicographic order of (x_0, x_1, ...).
MaxSatResult max_sat_bruteforce(const Formula& f);

/// DIMACS CNF with 1-based variables; comment lines start with 'c'.
Formula parse_dimacs(std::istream& in);
Formula parse_dimacs(std::string_view text);
void write_dimacs(std::ostream& out, const Formula& f);

/// Each clause samples three distinct variables uniformly and negates each
/// with probability 1/2. Deterministic in seed.
Formula generate_uniform(Var num_vars, std::size_t num_clauses, std::uint64_t seed);

}  // namespace patqubo
