#include "patqubo/sat.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "patqubo/error.hpp"
#include "patqubo/rng.hpp"

namespace patqubo {

ClauseType clause_type_from_index(int t) {
  if (t < 0 || t > 3) throw InvalidInput("clause type must be in 0..3, got " + std::to_string(t));
  return static_cast<ClauseType>(t);
}

Clause::Clause(Literal a, Literal b, Literal c) : lits_{a, b, c} {
  if (a.var == b.var || a.var == c.var || b.var == c.var) {
    std::ostringstream msg;
    msg << "clause repeats a variable (" << a.var << ", " << b.var << ", " << c.var << ")";
    throw InvalidClause(msg.str());
  }
}

Formula::Formula(Var num_vars, std::vector<Clause> clauses)
    : num_vars_(num_vars), clauses_(std::move(clauses)) {
  if (clauses_.empty()) throw InvalidInput("formula must contain at least one clause");
  for (const Clause& c : clauses_) {
    for (const Literal& l : c.literals()) {
      if (l.var >= num_vars_) {
        std::ostringstream msg;
        msg << "literal variable " << l.var << " out of range for " << num_vars_
            << " variables";
        throw InvalidInput(msg.str());
      }
    }
  }
}

ClauseType clause_type(const Clause& c) {
  int negated = 0;
  for (const Literal& l : c.literals()) negated += l.negated ? 1 : 0;
  return static_cast<ClauseType>(negated);
}

Clause sort_clause(const Clause& c) {
  std::array<Literal, 3> lits = c.literals();
  std::stable_partition(lits.begin(), lits.end(), [](const Literal& l) { return !l.negated; });
  return Clause(lits[0], lits[1], lits[2]);
}

std::size_t count_satisfied(const Formula& f, std::span<const std::uint8_t> x) {
  if (x.size() < f.num_vars()) throw InvalidInput("assignment shorter than the formula's variable count");
  return static_cast<std::size_t>(std::count_if(
      f.clauses().begin(), f.clauses().end(), [&](const Clause& c) { return c.satisfied_by(x); }));
}

MaxSatResult max_sat_bruteforce(const Formula& f) {
  const Var n = f.num_vars();
  if (n > kMaxSatBruteforceCap) {
    std::ostringstream msg;
    msg << "brute-force MAX-SAT over " << n << " variables exceeds the cap of "
        << kMaxSatBruteforceCap;
    throw InfeasibleEnumeration(msg.str());
  }

  // Occurrence lists and per-clause true-literal counts, updated per flip.
  std::vector<std::vector<std::pair<std::size_t, bool>>> occurs(n);
  for (std::size_t ci = 0; ci < f.num_clauses(); ++ci)
    for (const Literal& l : f.clauses()[ci].literals()) occurs[l.var].push_back({ci, l.negated});

  Assignment x(n, 0);
  std::vector<int> true_count(f.num_clauses(), 0);
  std::size_t sat = 0;
  for (std::size_t ci = 0; ci < f.num_clauses(); ++ci) {
    for (const Literal& l : f.clauses()[ci].literals()) true_count[ci] += l.eval(x) ? 1 : 0;
    sat += true_count[ci] > 0 ? 1 : 0;
  }

  auto flip = [&](Var v) {
    x[v] ^= 1U;
    for (const auto& [ci, negated] : occurs[v]) {
      const bool now_true = (x[v] != 0) != negated;
      const int before = true_count[ci];
      true_count[ci] += now_true ? 1 : -1;
      if (before == 0) ++sat;
      if (true_count[ci] == 0) --sat;
    }
  };

  MaxSatResult best{sat, x};
  // Binary counting with x_0 as the most significant bit.
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    for (Var v = n; v-- > 0;) {
      flip(v);
      if (x[v]) break;
    }
    if (sat > best.satisfied) {
      best.satisfied = sat;
      best.witness = x;
      if (sat == f.num_clauses()) break;
    }
  }
  return best;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

Formula parse_dimacs(std::istream& in) {
  long long num_vars = -1;
  long long num_clauses = -1;
  std::vector<Clause> clauses;
  std::vector<long long> pending;
  std::string raw;
  std::size_t line_no = 0;

  auto finish_clause = [&] {
    if (pending.size() != 3) {
      std::ostringstream msg;
      msg << "line " << line_no << ": clause has " << pending.size()
          << " literals, only 3-literal clauses are supported";
      throw UnsupportedClause(msg.str());
    }
    std::array<Literal, 3> lits;
    for (std::size_t i = 0; i < 3; ++i) {
      const long long lit = pending[i];
      const long long var = lit < 0 ? -lit : lit;
      if (var > num_vars) {
        std::ostringstream msg;
        msg << "line " << line_no << ": literal " << lit << " exceeds declared variable count";
        throw ParseError(msg.str());
      }
      lits[i] = Literal{static_cast<Var>(var - 1), lit < 0};
    }
    clauses.emplace_back(lits[0], lits[1], lits[2]);
    pending.clear();
  };

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == 'c') continue;
    if (line[0] == '%') break;
    if (line[0] == 'p') {
      std::istringstream header(line);
      std::string p, fmt, extra;
      if (num_vars >= 0 || !(header >> p >> fmt >> num_vars >> num_clauses) || p != "p" ||
          fmt != "cnf" || num_vars < 1 || num_clauses < 1 || (header >> extra)) {
        throw ParseError("line " + std::to_string(line_no) + ": malformed header '" + line + "'");
      }
      continue;
    }
    if (num_vars < 0) {
      throw ParseError("line " + std::to_string(line_no) + ": clause before 'p cnf' header");
    }
    std::istringstream body(line);
    std::string token;
    while (body >> token) {
      long long lit = 0;
      std::size_t used = 0;
      try {
        lit = std::stoll(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size())
        throw ParseError("line " + std::to_string(line_no) + ": bad literal '" + token + "'");
      if (lit == 0)
        finish_clause();
      else
        pending.push_back(lit);
    }
  }

  if (num_vars < 0) throw ParseError("missing 'p cnf' header");
  if (!pending.empty()) throw ParseError("last clause is not terminated by 0");
  if (static_cast<long long>(clauses.size()) != num_clauses) {
    std::ostringstream msg;
    msg << "header declares " << num_clauses << " clauses but " << clauses.size()
        << " were read";
    throw ParseError(msg.str());
  }
  return Formula(static_cast<Var>(num_vars), std::move(clauses));
}

Formula parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

void write_dimacs(std::ostream& out, const Formula& f) {
  out << "p cnf " << f.num_vars() << ' ' << f.num_clauses() << '\n';
  for (const Clause& c : f.clauses()) {
    for (const Literal& l : c.literals()) out << (l.negated ? "-" : "") << (l.var + 1) << ' ';
    out << "0\n";
  }
}

Formula generate_uniform(Var num_vars, std::size_t num_clauses, std::uint64_t seed) {
  if (num_vars < 3) throw InvalidInput("uniform 3-SAT generation needs at least 3 variables");
  if (num_clauses < 1) throw InvalidInput("uniform 3-SAT generation needs at least 1 clause");
  Rng rng(seed);
  std::vector<Clause> clauses;
  clauses.reserve(num_clauses);
  for (std::size_t k = 0; k < num_clauses; ++k) {
    std::array<Var, 3> vars{};
    for (std::size_t i = 0; i < 3; ++i) {
      Var v;
      do {
        v = static_cast<Var>(rng.below(num_vars));
      } while (std::find(vars.begin(), vars.begin() + i, v) != vars.begin() + i);
      vars[i] = v;
    }
    std::array<Literal, 3> lits;
    for (std::size_t i = 0; i < 3; ++i) lits[i] = Literal{vars[i], rng.bernoulli(0.5)};
    clauses.emplace_back(lits[0], lits[1], lits[2]);
  }
  return Formula(num_vars, std::move(clauses));
}

}  // namespace patqubo
