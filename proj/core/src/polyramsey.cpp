#include "hjp/polyramsey.hpp"

#include <bit>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace hjp {

RingZq::RingZq(int modulus) : q(modulus) {
  if (modulus < 2) throw std::invalid_argument("ring modulus must be at least 2");
}

int RingZq::norm(long long x) const {
  long long r = x % q;
  return static_cast<int>(r < 0 ? r + q : r);
}

int RingZq::pow(int a, int e) const {
  int out = 1 % q;
  for (int i = 0; i < e; ++i) out = mul(out, a);
  return out;
}

int PolySpec::degree() const {
  int d = 0;
  for (const auto& coord : polys)
    for (const auto& p : coord) d = std::max(d, static_cast<int>(p.size()) - 1);
  return d;
}

PolySpec PolySpec::parse(std::string_view text, int q) {
  const RingZq ring(q);
  PolySpec out;
  out.q = q;
  out.polys.emplace_back();
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    for (char& ch : line)
      if (ch == ',' || ch == '\t' || ch == '\r') ch = ' ';
    std::istringstream words(line);
    std::string word;
    std::vector<std::string> tokens;
    while (words >> word) tokens.push_back(word);
    if (tokens.empty()) continue;
    if (tokens.size() == 1 && tokens[0] == "m") {
      if (out.polys.back().empty()) throw ParseError(lineno, "coordinate separator before any polynomial");
      out.polys.emplace_back();
      continue;
    }
    UniPoly p;
    for (const auto& tok : tokens) {
      long long v = 0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError(lineno, "not an integer coefficient: '" + tok + "'");
      p.push_back(ring.norm(v));
    }
    while (!p.empty() && p.back() == 0) p.pop_back();
    out.polys.back().push_back(std::move(p));
  }
  if (out.polys.back().empty()) {
    if (out.polys.size() == 1) throw ParseError(lineno, "no polynomials given");
    throw ParseError(lineno, "empty coordinate after separator");
  }
  return out;
}

void validate(const PolySpec& polys, int t) {
  if (polys.q < 2) throw std::invalid_argument("ring modulus must be at least 2");
  if (polys.polys.empty() || polys.letters() == 0) throw std::invalid_argument("no polynomials");
  if (polys.letters() > kMaxLetters) throw std::invalid_argument("too many letters");
  for (std::size_t m = 0; m < polys.polys.size(); ++m) {
    if (static_cast<int>(polys.polys[m].size()) != polys.letters())
      throw std::invalid_argument("coordinate " + std::to_string(m) + " has " +
                                  std::to_string(polys.polys[m].size()) + " polynomials, expected " +
                                  std::to_string(polys.letters()));
    for (std::size_t a = 0; a < polys.polys[m].size(); ++a) {
      const auto& p = polys.polys[m][a];
      const std::string name = "polynomial " + std::to_string(a) + (polys.mstar() > 1 ? " of coordinate " + std::to_string(m) : "");
      for (int coef : p)
        if (coef < 0 || coef >= polys.q) throw std::invalid_argument(name + ": coefficient outside Z_" + std::to_string(polys.q));
      int deg = static_cast<int>(p.size()) - 1;
      while (deg >= 0 && p[deg] == 0) --deg;
      if (deg > t)
        throw std::invalid_argument(name + " has degree " + std::to_string(deg) + "; need t >= " + std::to_string(deg) +
                                    " so every monomial support fits an element");
      if (!p.empty() && p[0] != 0)
        throw std::invalid_argument(name + " has nonzero constant term " + std::to_string(p[0]) +
                                    "; the support partition drops constants, shift y instead");
    }
  }
}

PointMask Monomial::support() const {
  PointMask s = 0;
  for (std::size_t j = 0; j < exponents.size(); ++j)
    if (exponents[j] > 0) s |= PointMask{1} << j;
  return s;
}

std::vector<Monomial> monomials(const MultiPoly& p) {
  std::vector<Monomial> out;
  for (const auto& [e, c] : p)
    if (c != 0) out.push_back({e, c});
  return out;
}

namespace {

MultiPoly mul(const MultiPoly& a, const MultiPoly& b, int q) {
  MultiPoly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      auto e = ea;
      for (std::size_t j = 0; j < e.size(); ++j) e[j] += eb[j];
      int& slot = out[e];
      slot = static_cast<int>((slot + static_cast<long long>(ca) * cb) % q);
    }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

}  // namespace

MultiPoly add(const MultiPoly& a, const MultiPoly& b, int q) {
  MultiPoly out = a;
  for (const auto& [e, c] : b) {
    int& slot = out[e];
    slot = (slot + c) % q;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

MultiPoly compose_sum(const UniPoly& p, PointMask vars, int k, int q) {
  MultiPoly sum;
  for (int j = 0; j < k; ++j)
    if (vars >> j & 1) {
      std::vector<int> e(static_cast<std::size_t>(k), 0);
      e[j] = 1;
      sum[e] = 1 % q;
    }
  std::erase_if(sum, [](const auto& kv) { return kv.second == 0; });
  MultiPoly power{{std::vector<int>(static_cast<std::size_t>(k), 0), 1 % q}};
  MultiPoly out;
  for (std::size_t d = 0; d < p.size(); ++d) {
    if (d > 0) power = mul(power, sum, q);
    if (p[d] % q == 0) continue;
    MultiPoly term;
    for (const auto& [e, c] : power) term[e] = static_cast<int>(static_cast<long long>(c) * p[d] % q);
    out = add(out, term, q);
  }
  return out;
}

MultiPoly restrict_support(const MultiPoly& p, PointMask support) {
  MultiPoly out;
  for (const auto& [e, c] : p)
    if (Monomial{e, c}.support() == support) out.emplace(e, c);
  return out;
}

int evaluate(const MultiPoly& p, std::span<const int> r, int q) {
  const RingZq ring(q);
  long long total = 0;
  for (const auto& [e, c] : p) {
    int term = c % q;
    for (std::size_t j = 0; j < e.size(); ++j) term = ring.mul(term, ring.pow(ring.norm(r[j]), e[j]));
    total = (total + term) % q;
  }
  return static_cast<int>(total);
}

namespace {

int eval_uni(const UniPoly& p, int x, const RingZq& ring) {
  int v = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = ring.add(ring.mul(v, x), *it);
  return v;
}

}  // namespace

Vocabulary polyramsey_vocabulary(int t, int mstar) {
  if (t < 1 || mstar < 1) throw std::invalid_argument("need t >= 1 and m* >= 1");
  std::vector<Symbol> syms;
  for (int s = 1; s <= t; ++s)
    for (int m = 0; m < mstar; ++m) {
      if (s == 1 && m == 0) {
        syms.push_back({"id", 1});
        continue;
      }
      std::string name = "F" + std::to_string(s);
      if (mstar > 1) name += "_" + std::to_string(m);
      syms.push_back({std::move(name), s});
    }
  return Vocabulary(std::move(syms));
}

GTables expand_g_tables(const Fim& m, std::span<const int> r, const PolySpec& polys) {
  const int k = m.dim();
  if (static_cast<int>(r.size()) != k)
    throw std::invalid_argument("need one ring element per point: got " + std::to_string(r.size()) + " for dimension " +
                                std::to_string(k));
  const int mstar = polys.mstar();
  const int t = m.vocab().max_arity();
  validate(polys, t);
  if (m.vocab() != polyramsey_vocabulary(t, mstar))
    throw std::invalid_argument("fim vocabulary must have m* symbols per arity 1..t");

  GTables g{m, polys.q, mstar, {}, {}};
  const RingZq ring(polys.q);
  std::vector<int> rn;
  for (int x : r) rn.push_back(ring.norm(x));
  std::map<std::pair<PointMask, const UniPoly*>, int> cache;
  for (const auto& e : m.elements()) {
    const int coord = e.symbol % mstar;
    g.coordinate.push_back(coord);
    std::vector<int> row(static_cast<std::size_t>(polys.letters()), 0);
    bool repeats = std::popcount(e.base_mask) != static_cast<int>(e.base.size());
    if (!repeats)
      for (int a = 0; a < polys.letters(); ++a) {
        const UniPoly* p = &polys.polys[coord][a];
        auto key = std::make_pair(e.base_mask, p);
        auto it = cache.find(key);
        if (it == cache.end())
          it = cache.emplace(key, evaluate(restrict_support(compose_sum(*p, e.base_mask, k, polys.q), e.base_mask), rn,
                                           polys.q)).first;
        row[a] = it->second;
      }
    g.table.push_back(std::move(row));
  }
  return g;
}

std::vector<int> g_value(const GTables& g, std::span<const Letter> eta) {
  std::vector<int> out(static_cast<std::size_t>(g.mstar), 0);
  for (std::size_t i = 0; i < g.table.size(); ++i) {
    int& slot = out[g.coordinate[i]];
    slot = (slot + g.table[i][eta[i]]) % g.q;
  }
  return out;
}

std::vector<int> line_offset(const GTables& g, const Line& line) {
  std::vector<int> out(static_cast<std::size_t>(g.mstar), 0);
  for (std::size_t i = 0; i < g.table.size(); ++i) {
    if (in_closure(g.fim, i, line.support)) continue;
    int& slot = out[g.coordinate[i]];
    slot = (slot + g.table[i][line.fixed[i]]) % g.q;
  }
  return out;
}

namespace {

int support_sum(PointMask support, std::span<const int> r, const RingZq& ring) {
  int z = 0;
  for (std::size_t j = 0; j < r.size(); ++j)
    if (support >> j & 1) z = ring.add(z, ring.norm(r[j]));
  return z;
}

}  // namespace

bool check_key_identity(const GTables& g, const Space& v, const Line& line, std::span<const int> r,
                        const PolySpec& polys) {
  const RingZq ring(g.q);
  const auto y = line_offset(g, line);
  const int z = support_sum(line.support, r, ring);
  SpacePoint pt(v.elements());
  for (int a = 0; a < polys.letters(); ++a) {
    pt_line_into(v, line, LambdaType(v.fim().vocab().size(), static_cast<Letter>(a)), pt);
    const auto gv = g_value(g, pt);
    for (int m = 0; m < g.mstar; ++m)
      if (gv[m] != ring.add(y[m], eval_uni(polys.polys[m][a], z, ring))) return false;
  }
  return true;
}

std::uint64_t ring_index(std::span<const int> x, int q) {
  std::uint64_t idx = 0;
  for (int v : x) idx = idx * static_cast<std::uint64_t>(q) + static_cast<std::uint64_t>(v);
  return idx;
}

RingColouring ring_table_colouring(std::vector<Colour> table, int q, Colour colours) {
  for (Colour c : table)
    if (c >= colours) throw std::invalid_argument("colour " + std::to_string(c) + " out of range");
  return {[table = std::move(table), q](std::span<const int> x) {
            auto idx = ring_index(x, q);
            if (idx >= table.size()) throw std::out_of_range("ring colouring table too short");
            return table[idx];
          },
          colours};
}

RingColouring ring_seeded_colouring(std::uint64_t seed, int q, Colour colours) {
  return {[seed, q, colours](std::span<const int> x) { return splitmix64(seed, ring_index(x, q)) % colours; },
          colours};
}

bool verify_pattern(const PolySpec& polys, const RingColouring& d, std::span<const int> y, int z) {
  const RingZq ring(polys.q);
  std::optional<Colour> first;
  std::vector<int> val(static_cast<std::size_t>(polys.mstar()));
  for (int a = 0; a < polys.letters(); ++a) {
    for (int m = 0; m < polys.mstar(); ++m) val[m] = ring.add(y[m], eval_uni(polys.polys[m][a], z, ring));
    Colour c = d(val);
    if (first && *first != c) return false;
    first = c;
  }
  return true;
}

PolyRamseyResult solve_polyramsey(const PolySpec& polys, const RingColouring& d, std::span<const int> r, int t,
                                  const SearchOptions& opt) {
  validate(polys, t);
  if (r.empty()) throw std::invalid_argument("need at least one ring element");
  const int k = static_cast<int>(r.size());
  const auto vocab = polyramsey_vocabulary(t, polys.mstar());
  const Fim m(vocab, k, TupleMode::multiset);
  const auto alphabets = AlphabetSeq::uniform(vocab, polys.letters());
  const Space v(m, alphabets);
  const auto g = expand_g_tables(m, r, polys);
  const Colouring dstar = callback_colouring([&](std::span<const Letter> eta) { return d(g_value(g, eta)); },
                                             d.colours);
  auto types = std::make_shared<const TypeSet>(TypeSet::constant(alphabets));
  const auto found = find_mono_line(v, dstar, types, opt);

  PolyRamseyResult out;
  out.status = found.status;
  out.examined = found.examined;
  if (found.status != SearchStatus::found) return out;
  const Line& line = found.value->line;
  out.line = line;
  out.colour = found.value->colour;
  out.y = line_offset(g, line);
  const RingZq ring(polys.q);
  out.z = support_sum(line.support, r, ring);
  for (int j = 0; j < k; ++j)
    if (line.support >> j & 1) out.w.push_back(j + 1);
  if (!check_key_identity(g, v, line, r, polys))
    throw std::logic_error("g(pt_L(α)) differs from y + p_α(z) on a found line");
  out.verified = verify_pattern(polys, d, out.y, out.z);
  return out;
}

}  // namespace hjp
