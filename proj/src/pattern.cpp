#include "patqubo/pattern.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "patqubo/error.hpp"
#include "patqubo/parallel.hpp"

namespace patqubo {

QuboMatrix PatternQubo::to_matrix() const {
  QuboMatrix q(kDim);
  for (std::size_t k = 0; k < kSize; ++k) q.set(kCells[k].first, kCells[k].second, values[k]);
  return q;
}

std::size_t PatternQubo::nonzero_count() const {
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [](Coefficient v) { return v != 0; }));
}

ValueRange::ValueRange(Coefficient lo, Coefficient hi) : lo_(lo), hi_(hi) {
  if (!(lo <= 0 && 0 <= hi)) {
    std::ostringstream msg;
    msg << "value range [" << lo << ", " << hi << "] must contain 0";
    throw InvalidInput(msg.str());
  }
  if (hi - lo > 1'000'000) throw InvalidInput("value range is unreasonably wide");
}

namespace {

Coefficient parse_int(std::string_view s, std::string_view what) {
  Coefficient v = 0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw InvalidInput("cannot parse " + std::string(what) + " from '" + std::string(s) + "'");
  return v;
}

}  // namespace

ValueRange ValueRange::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw InvalidInput("value range must be written lo:hi, got '" + std::string(text) + "'");
  return ValueRange(parse_int(text.substr(0, colon), "range bound"),
                    parse_int(text.substr(colon + 1), "range bound"));
}

std::string ValueRange::to_string() const {
  return std::to_string(lo_) + ":" + std::to_string(hi_);
}

Energy PatternAnalysis::min_sat() const {
  return *std::min_element(sat_energies.begin(), sat_energies.end());
}

Energy PatternAnalysis::max_sat() const {
  return *std::max_element(sat_energies.begin(), sat_energies.end());
}

FitnessCriteria FitnessCriteria::parse(std::string_view text) {
  FitnessCriteria c;
  c.use_uniformity = false;
  c.use_correctness = false;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find(',', start), text.size());
    const std::string_view item = text.substr(start, end - start);
    start = end + 1;
    if (item.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto eq = item.find('=');
    const std::string_view name = item.substr(0, eq);
    const std::string_view value = eq == std::string_view::npos ? "" : item.substr(eq + 1);
    auto need_value = [&] {
      if (value.empty()) throw InvalidInput("criterion '" + std::string(name) + "' needs =value");
    };
    if (name == "uniformity") {
      c.use_uniformity = true;
    } else if (name == "correctness") {
      c.use_correctness = true;
    } else if (name == "correct" || name == "valid") {
      c.use_uniformity = c.use_correctness = true;
    } else if (name == "sparsity") {
      need_value();
      const Coefficient sp = parse_int(value, "sparsity");
      if (sp < 0 || sp > 10) throw InvalidInput("sparsity must be in 0..10");
      c.use_sparsity = true;
      c.desired_sparsity = static_cast<std::size_t>(sp);
    } else if (name == "gap") {
      need_value();
      c.use_gap = true;
      c.desired_gap = parse_int(value, "gap");
    } else if (name == "C") {
      need_value();
      c.correctness_constant = parse_int(value, "correctness constant");
    } else {
      throw InvalidInput("unknown fitness criterion '" + std::string(name) + "'");
    }
    if (end == text.size()) break;
  }
  c.validate();
  return c;
}

std::string FitnessCriteria::to_string() const {
  std::vector<std::string> parts;
  if (use_uniformity) parts.emplace_back("uniformity");
  if (use_correctness) parts.emplace_back("correctness");
  if (use_sparsity) parts.push_back("sparsity=" + std::to_string(desired_sparsity));
  if (use_gap) parts.push_back("gap=" + std::to_string(desired_gap));
  if (correctness_constant != 10) parts.push_back("C=" + std::to_string(correctness_constant));
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
  return out;
}

void FitnessCriteria::validate() const {
  if (!use_uniformity && !use_correctness && !use_sparsity && !use_gap)
    throw InvalidInput("at least one fitness criterion must be enabled");
  if (correctness_constant <= 0) throw InvalidInput("correctness constant must be positive");
  if (desired_gap < 0) throw InvalidInput("desired gap must be non-negative");
  if (desired_sparsity > PatternQubo::kSize) throw InvalidInput("sparsity must be in 0..10");
}

ClauseAssignments clause_assignments(ClauseType t) {
  const std::size_t negated = index_of(t);
  ClauseAssignments out;
  std::size_t next_sat = 0;
  for (std::uint8_t bits = 0; bits < 8; ++bits) {
    const std::array<std::uint8_t, 3> abc = {static_cast<std::uint8_t>((bits >> 2) & 1U),
                                             static_cast<std::uint8_t>((bits >> 1) & 1U),
                                             static_cast<std::uint8_t>(bits & 1U)};
    bool sat = false;
    for (std::size_t i = 0; i < 3; ++i) sat = sat || ((abc[i] != 0) != (i >= 3 - negated));
    if (sat)
      out.sat[next_sat++] = abc;
    else
      out.unsat = abc;
  }
  return out;
}

namespace {

// Aux-minimized energy of (a, b, c) without building a QuboMatrix.
inline Energy local_energy(const std::array<Coefficient, 10>& q, unsigned a, unsigned b,
                           unsigned c) {
  const Energy base = q[0] * a + q[1] * a * b + q[2] * a * c + q[4] * b + q[5] * b * c + q[7] * c;
  const Energy aux = q[3] * a + q[6] * b + q[8] * c + q[9];
  return aux < 0 ? base + aux : base;
}

inline PatternAnalysis analyze_values(const std::array<Coefficient, 10>& q,
                                      const ClauseAssignments& split) {
  PatternAnalysis out;
  for (std::size_t i = 0; i < 7; ++i) {
    const auto& s = split.sat[i];
    out.sat_energies[i] = local_energy(q, s[0], s[1], s[2]);
  }
  out.unsat_energy = local_energy(q, split.unsat[0], split.unsat[1], split.unsat[2]);
  const Energy lo = out.min_sat();
  const Energy hi = out.max_sat();
  out.uniform = lo == hi;
  out.valid = out.uniform && hi < out.unsat_energy;
  out.sparsity = static_cast<std::size_t>(
      std::count_if(q.begin(), q.end(), [](Coefficient v) { return v != 0; }));
  out.gap = hi > out.unsat_energy ? hi - out.unsat_energy : out.unsat_energy - hi;
  return out;
}

Energy abs_diff(Energy a, Energy b) { return a > b ? a - b : b - a; }

}  // namespace

PatternAnalysis analyze(const PatternQubo& p, ClauseType t) {
  for (Coefficient v : p.values) {
    if (v > (Coefficient{1} << 40) || v < -(Coefficient{1} << 40))
      throw InvalidInput("pattern coefficient magnitude too large");
  }
  return analyze_values(p.values, clause_assignments(t));
}

Energy fitness(const PatternAnalysis& a, const FitnessCriteria& crit) {
  Energy total = 0;
  if (crit.use_uniformity) {
    const Energy lo = a.min_sat();
    for (Energy e : a.sat_energies) total -= abs_diff(lo, e);
  }
  if (crit.use_correctness) {
    for (Energy e : a.sat_energies) {
      if (e >= a.unsat_energy)
        total -= crit.correctness_constant * abs_diff(a.unsat_energy, e) + crit.correctness_constant;
    }
  }
  if (crit.use_sparsity) {
    total -= abs_diff(static_cast<Energy>(crit.desired_sparsity), static_cast<Energy>(a.sparsity));
  }
  if (crit.use_gap) total -= abs_diff(a.gap, crit.desired_gap);
  return total;
}

Energy fitness(const PatternQubo& p, ClauseType t, const FitnessCriteria& crit) {
  return fitness(analyze(p, t), crit);
}

std::uint64_t enumeration_candidates(const ValueRange& range) {
  std::uint64_t total = 1;
  for (std::size_t k = 0; k < PatternQubo::kSize; ++k) {
    if (__builtin_mul_overflow(total, range.size(), &total)) return UINT64_MAX;
  }
  return total;
}

std::vector<PatternQubo> enumerate_patterns(const ValueRange& range, ClauseType t,
                                            const FitnessCriteria& crit,
                                            const EnumerationOptions& opts) {
  crit.validate();
  const std::uint64_t candidates = enumeration_candidates(range);
  if (candidates > opts.budget) {
    std::ostringstream msg;
    msg << "exhaustive enumeration of range " << range.to_string() << " needs ";
    if (candidates == UINT64_MAX)
      msg << "more than 2^64";
    else
      msg << candidates;
    msg << " candidates, budget is " << opts.budget;
    throw InfeasibleEnumeration(msg.str());
  }

  const ClauseAssignments split = clause_assignments(t);
  const auto width = static_cast<std::size_t>(range.size());

  // One chunk per leading coefficient, concatenated in order.
  std::vector<std::vector<PatternQubo>> chunks(width);
  parallel_for(width, opts.threads, [&](std::size_t chunk) {
    std::array<Coefficient, 10> q;
    q.fill(range.lo());
    q[0] = range.lo() + static_cast<Coefficient>(chunk);
    auto& found = chunks[chunk];
    while (true) {
      if (fitness(analyze_values(q, split), crit) == 0) found.push_back(PatternQubo{q});
      std::size_t k = PatternQubo::kSize;
      while (--k > 0) {
        if (q[k] < range.hi()) {
          ++q[k];
          break;
        }
        q[k] = range.lo();
      }
      if (k == 0) break;
    }
  });

  std::vector<PatternQubo> out;
  for (auto& c : chunks) out.insert(out.end(), c.begin(), c.end());
  return out;
}

std::string canonical_key(const PatternQubo& p) {
  std::string key(PatternQubo::kSize * 8, '\0');
  for (std::size_t k = 0; k < PatternQubo::kSize; ++k) {
    const std::uint64_t biased = static_cast<std::uint64_t>(p.values[k]) ^ (std::uint64_t{1} << 63);
    for (std::size_t b = 0; b < 8; ++b)
      key[k * 8 + b] = static_cast<char>((biased >> (56 - 8 * b)) & 0xFFU);
  }
  return key;
}

PatternQubo pattern_from_key(std::string_view key) {
  if (key.size() != PatternQubo::kSize * 8) throw InvalidInput("pattern key must be 80 bytes");
  PatternQubo p;
  for (std::size_t k = 0; k < PatternQubo::kSize; ++k) {
    std::uint64_t biased = 0;
    for (std::size_t b = 0; b < 8; ++b)
      biased = (biased << 8) | static_cast<unsigned char>(key[k * 8 + b]);
    p.values[k] = static_cast<Coefficient>(biased ^ (std::uint64_t{1} << 63));
  }
  return p;
}

}  // namespace patqubo
