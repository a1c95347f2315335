#include "patqubo/qubo.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "patqubo/error.hpp"

namespace patqubo {

namespace detail {

Coefficient checked_add(Coefficient a, Coefficient b) {
  Coefficient r;
  if (__builtin_add_overflow(a, b, &r))
    throw InvalidInput("integer overflow in QUBO coefficient arithmetic");
  return r;
}

Coefficient checked_mul(Coefficient a, Coefficient b) {
  Coefficient r;
  if (__builtin_mul_overflow(a, b, &r))
    throw InvalidInput("integer overflow in QUBO coefficient arithmetic");
  return r;
}

}  // namespace detail

using detail::checked_add;

QuboMatrix::Key QuboMatrix::key(Index i, Index j) const {
  if (i >= dim_ || j >= dim_) {
    std::ostringstream msg;
    msg << "QUBO index (" << i << ", " << j << ") out of range for dim " << dim_;
    throw InvalidInput(msg.str());
  }
  return i <= j ? Key{i, j} : Key{j, i};
}

Coefficient QuboMatrix::at(Index i, Index j) const {
  const auto it = entries_.find(key(i, j));
  return it == entries_.end() ? 0 : it->second;
}

void QuboMatrix::add(Index i, Index j, Coefficient v) {
  if (v == 0) {
    key(i, j);
    return;
  }
  const Key k = key(i, j);
  auto it = entries_.find(k);
  if (it == entries_.end()) {
    entries_.emplace(k, v);
    return;
  }
  it->second = checked_add(it->second, v);
  if (it->second == 0) entries_.erase(it);
}

void QuboMatrix::set(Index i, Index j, Coefficient v) {
  const Key k = key(i, j);
  if (v == 0)
    entries_.erase(k);
  else
    entries_[k] = v;
}

namespace {

void require_length(const QuboMatrix& q, std::size_t len) {
  if (len != q.dim()) {
    std::ostringstream msg;
    msg << "assignment length " << len << " does not match QUBO dim " << q.dim();
    throw InvalidInput(msg.str());
  }
}

}  // namespace

Energy energy(const QuboMatrix& q, std::span<const std::uint8_t> x) {
  require_length(q, x.size());
  Energy e = 0;
  for (const auto& [ij, v] : q.entries()) {
    if (x[ij.first] && x[ij.second]) e = checked_add(e, v);
  }
  return e;
}

bool trailing_variables_independent(const QuboMatrix& q, std::size_t first) {
  return std::none_of(q.entries().begin(), q.entries().end(), [&](const auto& e) {
    const auto [i, j] = e.first;
    return i != j && i >= first && j >= first;
  });
}

Energy assignment_energy_with_aux(const QuboMatrix& q,
                                  std::span<const std::uint8_t> x_main,
                                  std::size_t aux_count,
                                  std::size_t enumeration_cap) {
  require_length(q, x_main.size() + aux_count);
  const std::size_t n = x_main.size();

  if (trailing_variables_independent(q, n)) {
    Energy base = 0;
    std::vector<Energy> aux_linear(aux_count, 0);
    for (const auto& [ij, v] : q.entries()) {
      const auto [i, j] = ij;
      if (j < n) {
        if (x_main[i] && x_main[j]) base = checked_add(base, v);
      } else if (i == j) {
        aux_linear[j - n] = checked_add(aux_linear[j - n], v);
      } else if (x_main[i]) {
        aux_linear[j - n] = checked_add(aux_linear[j - n], v);
      }
    }
    for (Energy c : aux_linear) {
      if (c < 0) base = checked_add(base, c);
    }
    return base;
  }

  if (aux_count > enumeration_cap) {
    std::ostringstream msg;
    msg << aux_count << " interacting auxiliaries exceed the enumeration cap of "
        << enumeration_cap;
    throw InfeasibleEnumeration(msg.str());
  }

  Assignment full(x_main.begin(), x_main.end());
  full.resize(q.dim(), 0);
  Energy best = energy(q, full);
  const std::uint64_t completions = std::uint64_t{1} << aux_count;
  for (std::uint64_t mask = 1; mask < completions; ++mask) {
    for (std::size_t k = 0; k < aux_count; ++k) full[n + k] = (mask >> k) & 1U;
    best = std::min(best, energy(q, full));
  }
  return best;
}

Energy flip_delta(const QuboMatrix& q, std::span<const std::uint8_t> x,
                  std::size_t k) {
  require_length(q, x.size());
  if (k >= q.dim()) {
    std::ostringstream msg;
    msg << "flip index " << k << " out of range for dim " << q.dim();
    throw InvalidInput(msg.str());
  }
  // Local field: Q_kk + sum over neighbours j of Q_kj x_j.
  Energy field = 0;
  const auto& entries = q.entries();
  for (auto it = entries.lower_bound({k, 0});
       it != entries.end() && it->first.first == k; ++it) {
    const auto j = it->first.second;
    if (j == k || x[j]) field = checked_add(field, it->second);
  }
  for (std::size_t i = 0; i < k; ++i) {
    const auto it = entries.find({i, k});
    if (it != entries.end() && x[i]) field = checked_add(field, it->second);
  }
  return x[k] ? -field : field;
}

void accumulate(QuboMatrix& target, const QuboMatrix& source,
                std::span<const std::size_t> index_map) {
  if (index_map.size() != source.dim())
    throw InvalidInput("index map length must equal source dimension");
  std::vector<std::size_t> sorted(index_map.begin(), index_map.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidInput("index map is not injective");
  if (!sorted.empty() && sorted.back() >= target.dim())
    throw InvalidInput("index map points outside the target matrix");

  for (const auto& [ij, v] : source.entries())
    target.add(index_map[ij.first], index_map[ij.second], v);
}

void write_qubo(std::ostream& out, const QuboMatrix& q) {
  out << "qubo " << q.dim() << ' ' << q.num_entries() << '\n';
  for (const auto& [ij, v] : q.entries())
    out << ij.first << ' ' << ij.second << ' ' << v << '\n';
}

QuboMatrix read_qubo(std::istream& in) {
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      const auto pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos || line[pos] == '#') continue;
      return true;
    }
    return false;
  };

  if (!next_line()) throw ParseError("empty QUBO file");
  std::istringstream header(line);
  std::string tag;
  long long dim = -1;
  long long count = -1;
  if (!(header >> tag >> dim >> count) || tag != "qubo" || dim < 0 || count < 0)
    throw ParseError("malformed QUBO header: '" + line + "'");

  QuboMatrix q(static_cast<std::size_t>(dim));
  for (long long e = 0; e < count; ++e) {
    if (!next_line()) throw ParseError("QUBO file ends before all entries are read");
    std::istringstream row(line);
    long long i = -1;
    long long j = -1;
    Coefficient v = 0;
    std::string rest;
    if (!(row >> i >> j >> v) || (row >> rest))
      throw ParseError("malformed QUBO entry: '" + line + "'");
    if (i < 0 || j < 0 || i > j || j >= dim)
      throw ParseError("QUBO entry out of upper-triangular range: '" + line + "'");
    if (v == 0) throw ParseError("explicit zero entry: '" + line + "'");
    if (q.at(i, j) != 0) throw ParseError("duplicate QUBO entry: '" + line + "'");
    q.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j), v);
  }
  if (next_line()) throw ParseError("trailing content after QUBO entries");
  return q;
}

}  // namespace patqubo
