#include "hjp/colouring.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace hjp {

std::uint64_t splitmix64(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Colouring constant_colouring(Colour colours, Colour value) {
  if (colours < 1 || value >= colours) throw std::invalid_argument("constant colour out of range");
  return {[value](std::span<const Letter>) { return value; }, colours};
}

Colouring table_colouring(const Space& v, std::vector<Colour> table, Colour colours) {
  if (colours < 1) throw std::invalid_argument("colourings need at least one colour");
  if (table.size() != v.size())
    throw std::invalid_argument("colour table has " + std::to_string(table.size()) + " entries for a space of " +
                                std::to_string(v.size()) + " points");
  for (Colour c : table)
    if (c >= colours) throw std::invalid_argument("colour table entry out of range");
  auto t = std::make_shared<const std::vector<Colour>>(std::move(table));
  return {[v, t](std::span<const Letter> p) { return (*t)[v.index(p)]; }, colours};
}

Colouring seeded_colouring(const Space& v, std::uint64_t seed, Colour colours) {
  if (colours < 1) throw std::invalid_argument("colourings need at least one colour");
  (void)v.size();
  return {[v, seed, colours](std::span<const Letter> p) { return splitmix64(seed, v.index(p)) % colours; },
          colours};
}

Colouring callback_colouring(std::function<Colour(std::span<const Letter>)> fn, Colour colours) {
  if (colours < 1) throw std::invalid_argument("colourings need at least one colour");
  return {std::move(fn), colours};
}

std::vector<Colour> colour_table(const Space& v, const Colouring& d) {
  const std::uint64_t n = v.size();
  std::vector<Colour> out(n);
  SpacePoint p(v.elements());
  for (std::uint64_t i = 0; i < n; ++i) {
    v.decode(i, p);
    out[i] = d(p);
  }
  return out;
}

void write_colouring(std::ostream& out, const Space& v, const Colouring& d) {
  out << "colouring c=" << d.colours << " n=" << v.size() << "\n";
  for (Colour c : colour_table(v, d)) out << c << "\n";
}

Colouring read_colouring(std::istream& in, const Space& v) {
  std::string line;
  int line_no = 0;
  auto next = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next()) throw ParseError(line_no, "missing colouring header");
  std::istringstream head(line);
  std::string word, cfield, nfield;
  head >> word >> cfield >> nfield;
  if (word != "colouring" || cfield.rfind("c=", 0) != 0 || nfield.rfind("n=", 0) != 0)
    throw ParseError(line_no, "expected 'colouring c=<int> n=<int>'");
  Colour colours = 0;
  std::uint64_t n = 0;
  try {
    colours = std::stoull(cfield.substr(2));
    n = std::stoull(nfield.substr(2));
  } catch (const std::exception&) {
    throw ParseError(line_no, "bad number in colouring header");
  }
  if (colours < 1) throw ParseError(line_no, "c must be positive");
  if (n != v.size())
    throw ParseError(line_no, "n=" + std::to_string(n) + " but the space has " + std::to_string(v.size()) + " points");
  std::vector<Colour> table;
  table.reserve(n);
  while (next()) {
    std::istringstream row(line);
    long long c = -1;
    std::string extra;
    if (!(row >> c) || (row >> extra)) throw ParseError(line_no, "expected one colour");
    if (c < 0 || static_cast<Colour>(c) >= colours) throw ParseError(line_no, "colour out of range");
    if (table.size() == n) throw ParseError(line_no, "more colours than points");
    table.push_back(static_cast<Colour>(c));
  }
  if (table.size() != n)
    throw ParseError(line_no, "expected " + std::to_string(n) + " colours, read " + std::to_string(table.size()));
  return table_colouring(v, std::move(table), colours);
}

namespace {

// Groups points by the letters on `key` elements among those passing `keep`;
// every group must be monochromatic.
InvarianceResult check_groups(const Space& v, const Colouring& d, const std::vector<std::size_t>& key,
                              const std::function<bool(std::span<const Letter>)>& keep) {
  std::map<std::vector<Letter>, std::pair<Colour, std::uint64_t>> seen;
  const std::uint64_t n = v.size();
  SpacePoint p(v.elements());
  std::vector<Letter> k(key.size());
  for (std::uint64_t i = 0; i < n; ++i) {
    v.decode(i, p);
    if (!keep(p)) continue;
    for (std::size_t j = 0; j < key.size(); ++j) k[j] = p[key[j]];
    const Colour c = d(p);
    auto [it, fresh] = seen.try_emplace(k, c, i);
    if (!fresh && it->second.first != c) return {false, std::make_pair(v.point(it->second.second), p)};
  }
  return {};
}

}  // namespace

InvarianceResult check_alpha_invariant(const Space& v, const Colouring& d, PointMask n_points, Letter alpha,
                                       std::size_t h) {
  const Fim& m = v.fim();
  if (h >= m.vocab().size()) throw std::invalid_argument("no such symbol");
  if (alpha >= v.alphabets()[h]) throw std::invalid_argument("alpha is not a letter of Λ_H");
  if ((n_points & ~m.all_points()) != 0) throw std::invalid_argument("N leaves the fim");
  for (int a : points_of(n_points)) {
    const PointMask bit = point_bit(a);
    std::vector<std::size_t> key, pinned;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const Element& e = m.element(i);
      if ((e.base_mask & bit) == 0) key.push_back(i);
      else if (e.base_mask == bit && static_cast<std::size_t>(e.symbol) == h) pinned.push_back(i);
    }
    auto r = check_groups(v, d, key, [&](std::span<const Letter> p) {
      for (std::size_t i : pinned)
        if (p[i] != alpha) return false;
      return true;
    });
    if (!r) return r;
  }
  return {};
}

InvarianceResult check_base_invariant(const Space& v, const Colouring& d, int ell, int r) {
  const Fim& m = v.fim();
  if (ell < 0 || ell > m.dim()) throw std::invalid_argument("ell out of range");
  if (r < 1) throw std::invalid_argument("r must be >= 1");
  for (int a = m.dim() - ell + 1; a <= m.dim(); ++a) {
    const PointMask bit = point_bit(a);
    std::vector<std::size_t> key;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const Element& e = m.element(i);
      if ((e.base_mask & bit) == 0) {
        key.push_back(i);
        continue;
      }
      const auto occ = std::count(e.base.begin(), e.base.end(), a);
      if (occ > r) key.push_back(i);
    }
    auto res = check_groups(v, d, key, [](std::span<const Letter>) { return true; });
    if (!res) return res;
  }
  return {};
}

}  // namespace hjp
