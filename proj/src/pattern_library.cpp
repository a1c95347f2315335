#include "patqubo/pattern_library.hpp"

#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "patqubo/error.hpp"

#ifndef PATQUBO_DATA_DIR
#define PATQUBO_DATA_DIR "data"
#endif

namespace patqubo {

std::size_t PatternLibrary::total() const {
  std::size_t n = 0;
  for (const auto& s : sets_) n += s.size();
  return n;
}

void PatternLibrary::validate() const {
  for (ClauseType t : kAllClauseTypes) {
    const auto& patterns = set(t);
    for (std::size_t i = 0; i < patterns.size(); ++i) {
      if (!analyze(patterns[i], t).valid) {
        std::ostringstream msg;
        msg << "pattern " << i << " of type " << index_of(t)
            << " violates the energy condition";
        throw ConfigError(msg.str());
      }
    }
  }
}

void PatternLibrary::require_types_of(const Formula& f) const {
  for (const Clause& c : f.clauses()) {
    const ClauseType t = clause_type(c);
    if (set(t).empty()) {
      throw ConfigError("pattern library has no patterns for clause type " +
                        std::to_string(index_of(t)));
    }
  }
}

void write_library(std::ostream& out, const PatternLibrary& lib) {
  out << "patqubo-library 1\n";
  for (ClauseType t : kAllClauseTypes) {
    out << "type " << index_of(t) << ' ' << lib.size(t) << '\n';
    for (const PatternQubo& p : lib.set(t)) {
      for (std::size_t k = 0; k < PatternQubo::kSize; ++k) out << (k ? " " : "") << p.values[k];
      out << '\n';
    }
  }
}

PatternLibrary read_library(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      const auto pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos || line[pos] == '#') continue;
      return true;
    }
    return false;
  };
  auto fail = [&](const std::string& what) -> ParseError {
    return ParseError("pattern library line " + std::to_string(line_no) + ": " + what);
  };

  if (!next_line()) throw ParseError("empty pattern library");
  {
    std::istringstream header(line);
    std::string tag;
    int version = 0;
    if (!(header >> tag >> version) || tag != "patqubo-library" || version != 1)
      throw fail("expected 'patqubo-library 1'");
  }

  PatternLibrary lib;
  for (ClauseType t : kAllClauseTypes) {
    if (!next_line()) throw fail("missing block for type " + std::to_string(index_of(t)));
    std::istringstream block(line);
    std::string tag;
    long long type = -1;
    long long count = -1;
    std::string rest;
    if (!(block >> tag >> type >> count) || tag != "type" || (block >> rest))
      throw fail("expected 'type <t> <count>'");
    if (type != static_cast<long long>(index_of(t)))
      throw fail("type blocks must appear in order 0..3");
    if (count < 0) throw fail("negative pattern count");
    for (long long i = 0; i < count; ++i) {
      if (!next_line()) throw fail("file ends inside type block");
      std::istringstream row(line);
      PatternQubo p;
      for (auto& v : p.values) {
        if (!(row >> v)) throw fail("pattern rows need 10 integers");
      }
      if (row >> rest) throw fail("pattern rows need exactly 10 integers");
      lib.set(t).push_back(p);
    }
  }
  if (next_line()) throw fail("unexpected content after type 3 block");
  return lib;
}

PatternLibrary load_library(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open pattern library '" + path.string() + "'");
  PatternLibrary lib;
  try {
    lib = read_library(in);
  } catch (const ParseError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  lib.validate();
  return lib;
}

void save_library(const std::filesystem::path& path, const PatternLibrary& lib) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write pattern library '" + path.string() + "'");
  write_library(out, lib);
}

PatternLibrary load_named_library(const std::string& name, const std::filesystem::path& data_dir) {
  if (name.empty() || name.find_first_of("/\\.") != std::string::npos)
    throw ConfigError("invalid named library '" + name + "'");
  PatternLibrary lib = load_library(data_dir / (name + ".lib"));
  for (ClauseType t : kAllClauseTypes) {
    if (lib.size(t) != 1) {
      throw ConfigError("named library '" + name + "' must hold exactly one pattern per type");
    }
  }
  return lib;
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("PATQUBO_DATA_DIR"); env != nullptr && *env != '\0')
    return env;
  return PATQUBO_DATA_DIR;
}

}  // namespace patqubo
