#include "config.hpp"

#include "hjp/model.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace hjp::cli {

namespace {

const std::set<std::string> kKeys = {"vocab", "symbol", "alpha", "mode", "k", "c", "seed", "budget", "jobs", "format"};

std::string trim(std::string s) {
  auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

template <class T>
T number(const std::string& text, int line, const std::string& key) {
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError(line, key + ": not a non-negative integer: '" + text + "'");
  return v;
}

}  // namespace

ConfigFile parse_config(const std::string& text) {
  ConfigFile out;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  std::string symbols;
  int symbol_line = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;
    auto cut = line.find_first_of("=: \t");
    if (cut == std::string::npos) throw ParseError(lineno, "missing value for '" + line + "'");
    std::string key = trim(line.substr(0, cut));
    std::string value = trim(line.substr(cut + 1));
    if (!value.empty() && (value[0] == '=' || value[0] == ':')) value = trim(value.substr(1));
    if (!kKeys.count(key)) throw ParseError(lineno, "unknown key '" + key + "'");
    if (value.empty()) throw ParseError(lineno, "missing value for '" + key + "'");
    if (key == "symbol") {
      if (out.values.count("vocab")) throw ParseError(lineno, "'symbol' lines cannot be mixed with 'vocab'");
      symbols += value + "\n";
      if (!symbol_line) symbol_line = lineno;
      continue;
    }
    if (key == "vocab" && !symbols.empty()) throw ParseError(lineno, "'vocab' cannot be mixed with 'symbol' lines");
    if (out.values.count(key)) throw ParseError(lineno, "duplicate key '" + key + "'");
    out.values[key] = {value, lineno};
  }
  if (!symbols.empty()) out.values["vocab"] = {symbols, symbol_line};
  return out;
}

void apply_config(const ConfigFile& file, Config& cfg, const std::map<std::string, bool>& given) {
  auto skip = [&](const std::string& key) {
    auto it = given.find(key);
    return it != given.end() && it->second;
  };
  for (const auto& [key, entry] : file.values) {
    if (skip(key)) continue;
    const auto& [value, line] = entry;
    if (key == "vocab") {
      try {
        (void)Vocabulary::parse(value);
      } catch (const ParseError& e) {
        throw ParseError(line + e.line() - 1, e.what());
      } catch (const std::exception& e) {
        throw ParseError(line, e.what());
      }
      cfg.vocab = value;
    } else if (key == "alpha") {
      cfg.alpha = value;
    } else if (key == "mode") {
      if (value != "set" && value != "multiset") throw ParseError(line, "mode must be set or multiset");
      cfg.mode = value;
    } else if (key == "format") {
      if (value != "plain" && value != "tsv") throw ParseError(line, "format must be plain or tsv");
      cfg.format = value;
    } else if (key == "k") {
      cfg.k = number<int>(value, line, key);
    } else if (key == "c") {
      cfg.c = number<std::uint64_t>(value, line, key);
    } else if (key == "seed") {
      cfg.seed = number<std::uint64_t>(value, line, key);
    } else if (key == "budget") {
      cfg.budget = number<std::uint64_t>(value, line, key);
    } else if (key == "jobs") {
      cfg.jobs = number<int>(value, line, key);
    }
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace hjp::cli
