#pragma once

// Run configuration shared by the subcommands. A config file holds one
// `key = value` per line (`:` or plain whitespace also separate); flags given
// on the command line win over the file.

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace hjp::cli {

struct Config {
  std::string vocab = "id 1";
  std::string alpha = "2";
  std::string mode = "set";
  int k = 2;
  std::uint64_t c = 2;
  std::uint64_t seed = 0;
  std::uint64_t budget = 0;
  int jobs = 1;
  std::string format = "plain";
};

/// Keys present in a file, by name, with the line they came from.
struct ConfigFile {
  std::map<std::string, std::pair<std::string, int>> values;
};

/// Throws hjp::ParseError with the line number on unknown keys, duplicate
/// keys or missing values. Repeated `symbol` lines build up the vocabulary.
ConfigFile parse_config(const std::string& text);

/// Copies file values into cfg for every key not in `given`. Bad numbers
/// throw ParseError pointing at their line.
void apply_config(const ConfigFile& file, Config& cfg, const std::map<std::string, bool>& given);

std::string read_file(const std::string& path);

}  // namespace hjp::cli
