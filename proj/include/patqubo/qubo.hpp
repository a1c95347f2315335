#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace patqubo {

using Coefficient = std::int64_t;
using Energy = std::int64_t;

/// One binary value per variable, 0 or 1.
using Assignment = std::vector<std::uint8_t>;

/// Upper-triangular integer QUBO matrix in canonical sparse form.
///
/// Entries are keyed by (i, j) with i <= j < dim. Zero coefficients are never
/// stored, so two matrices compare equal iff they describe the same
/// polynomial. All arithmetic is overflow-checked.
class QuboMatrix {
 public:
  using Index = std::size_t;
  using Key = std::pair<Index, Index>;

  explicit QuboMatrix(std::size_t dim = 0) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t num_entries() const { return entries_.size(); }
  const std::map<Key, Coefficient>& entries() const { return entries_; }

  /// Coefficient of x_i x_j (or x_i for i == j); argument order is irrelevant.
  Coefficient at(Index i, Index j) const;

  /// Adds v to the (i, j) coefficient; argument order is irrelevant.
  void add(Index i, Index j, Coefficient v);
  void set(Index i, Index j, Coefficient v);

  friend bool operator==(const QuboMatrix&, const QuboMatrix&) = default;

 private:
  Key key(Index i, Index j) const;

  std::size_t dim_;
  std::map<Key, Coefficient> entries_;
};

/// Assignments of up to this many interacting auxiliaries are enumerated.
inline constexpr std::size_t kDefaultAuxEnumerationCap = 20;

/// x^T Q x for a full assignment.
Energy energy(const QuboMatrix& q, std::span<const std::uint8_t> x);

/// Minimum energy over all completions of the trailing `aux_count` variables.
///
/// When no two auxiliaries share a nonzero coefficient, each auxiliary is
/// fixed independently (y_k = 1 iff its conditional linear coefficient is
/// negative), which is linear in aux_count. Otherwise every completion is
/// enumerated, provided aux_count <= enumeration_cap.
Energy assignment_energy_with_aux(
    const QuboMatrix& q, std::span<const std::uint8_t> x_main,
    std::size_t aux_count,
    std::size_t enumeration_cap = kDefaultAuxEnumerationCap);

/// True if no stored entry couples two distinct variables with index >= first.
bool trailing_variables_independent(const QuboMatrix& q, std::size_t first);

/// energy(q, x with bit k flipped) - energy(q, x), using only row/column k.
Energy flip_delta(const QuboMatrix& q, std::span<const std::uint8_t> x,
                  std::size_t k);

/// Adds every entry (i, j, v) of source to target at (map[i], map[j]).
/// index_map must be injective and in range; it is checked before target is
/// touched.
void accumulate(QuboMatrix& target, const QuboMatrix& source,
                std::span<const std::size_t> index_map);

/// Text form: header `qubo <dim> <num_entries>`, then one `i j value` line per
/// entry with i <= j.
void write_qubo(std::ostream& out, const QuboMatrix& q);
QuboMatrix read_qubo(std::istream& in);

namespace detail {
Coefficient checked_add(Coefficient a, Coefficient b);
Coefficient checked_mul(Coefficient a, Coefficient b);
}  // namespace detail

}  // namespace patqubo
