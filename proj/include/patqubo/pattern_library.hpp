#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "patqubo/pattern.hpp"

namespace patqubo {

/// Four ordered pattern lists, one per clause type. The position of a pattern
/// in its list is the index used by selection genomes.
///
/// File grammar (line oriented, '#' starts a comment line):
///
///     patqubo-library 1
///     type <t> <count>
///     <10 integers>          (count lines)
///     ...                    (one `type` block per clause type 0..3, in order)
class PatternLibrary {
 public:
  PatternLibrary() = default;
  explicit PatternLibrary(std::array<std::vector<PatternQubo>, 4> sets) : sets_(std::move(sets)) {}

  const std::vector<PatternQubo>& set(ClauseType t) const { return sets_[index_of(t)]; }
  std::vector<PatternQubo>& set(ClauseType t) { return sets_[index_of(t)]; }
  std::size_t size(ClauseType t) const { return set(t).size(); }
  std::size_t total() const;

  /// Throws ConfigError naming the first pattern that fails the energy
  /// condition for its type.
  void validate() const;

  /// Throws ConfigError if a clause type used by f has no patterns.
  void require_types_of(const Formula& f) const;

  friend bool operator==(const PatternLibrary&, const PatternLibrary&) = default;

 private:
  std::array<std::vector<PatternQubo>, 4> sets_;
};

void write_library(std::ostream& out, const PatternLibrary& lib);
PatternLibrary read_library(std::istream& in);

/// Reads and validates a library file; every failure is a ConfigError.
PatternLibrary load_library(const std::filesystem::path& path);
void save_library(const std::filesystem::path& path, const PatternLibrary& lib);

/// Loads `<data_dir>/<name>.lib` (e.g. "chancellor", "nuesslein"), validates
/// it and checks that every type holds exactly one pattern.
PatternLibrary load_named_library(const std::string& name, const std::filesystem::path& data_dir);

/// Directory with the bundled named libraries.
std::filesystem::path default_data_dir();

}  // namespace patqubo
