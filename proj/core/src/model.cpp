#include "hjp/model.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <functional>
#include <sstream>
#include <unordered_map>

namespace hjp {

PointMask point_bit(int a) {
  if (a < 1 || a > kMaxDim) throw std::invalid_argument("point out of range: " + std::to_string(a));
  return PointMask{1} << (a - 1);
}

PointMask mask_of(std::span<const int> points) {
  PointMask m = 0;
  for (int a : points) m |= point_bit(a);
  return m;
}

std::vector<int> points_of(PointMask mask) {
  std::vector<int> out;
  while (mask != 0) {
    out.push_back(std::countr_zero(mask) + 1);
    mask &= mask - 1;
  }
  return out;
}

int popcount(PointMask mask) { return std::popcount(mask); }

// ---------------------------------------------------------------- Vocabulary

namespace {

void validate_symbols(std::vector<Symbol>& symbols) {
  for (const auto& s : symbols) {
    if (s.name.empty()) throw std::invalid_argument("symbol with empty name");
    for (char ch : s.name) {
      if (std::isspace(static_cast<unsigned char>(ch)))
        throw std::invalid_argument("symbol name contains whitespace: '" + s.name + "'");
    }
    if (s.arity < 1) throw std::invalid_argument("symbol '" + s.name + "' has arity < 1");
    if (s.arity > kMaxArity)
      throw std::invalid_argument("symbol '" + s.name + "' exceeds the maximal arity " +
                                  std::to_string(kMaxArity));
  }
  for (std::size_t i = 0; i < symbols.size(); ++i)
    for (std::size_t j = i + 1; j < symbols.size(); ++j)
      if (symbols[i].name == symbols[j].name)
        throw std::invalid_argument("duplicate symbol name '" + symbols[i].name + "'");

  auto it = std::find_if(symbols.begin(), symbols.end(),
                         [](const Symbol& s) { return s.name == "id"; });
  if (it == symbols.end()) {
    symbols.insert(symbols.begin(), Symbol{"id", 1});
  } else {
    if (it->arity != 1) throw std::invalid_argument("symbol 'id' must be unary");
    std::rotate(symbols.begin(), it, it + 1);
  }
}

}  // namespace

Vocabulary::Vocabulary() : symbols_{Symbol{"id", 1}} {}

Vocabulary::Vocabulary(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
  validate_symbols(symbols_);
}

Vocabulary Vocabulary::canonical(int t) {
  if (t < 1 || t > kMaxArity)
    throw std::invalid_argument("canonical vocabulary needs 1 <= t <= " + std::to_string(kMaxArity));
  std::vector<Symbol> s{{"id", 1}};
  for (int r = 2; r <= t; ++r) s.push_back({"F" + std::to_string(r), r});
  return Vocabulary(std::move(s));
}

Vocabulary Vocabulary::parse(std::string_view text) {
  std::vector<Symbol> symbols;
  std::optional<int> canonical_t;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find_first_of("\n;", pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream in(line);
    std::string name;
    if (!(in >> name)) {
      if (end == text.size()) break;
      continue;
    }
    long long arity = 0;
    if (!(in >> arity)) throw ParseError(line_no, "expected '<name> <arity>' or 'canonical <t>'");
    std::string extra;
    if (in >> extra) throw ParseError(line_no, "trailing text '" + extra + "'");
    if (name == "canonical") {
      if (canonical_t || !symbols.empty())
        throw ParseError(line_no, "'canonical' must be the only declaration");
      if (arity < 1 || arity > kMaxArity) throw ParseError(line_no, "canonical t out of range");
      canonical_t = static_cast<int>(arity);
      continue;
    }
    if (canonical_t) throw ParseError(line_no, "'canonical' must be the only declaration");
    if (arity < 1 || arity > kMaxArity)
      throw ParseError(line_no, "arity of '" + name + "' out of range");
    symbols.push_back({name, static_cast<int>(arity)});
    if (end == text.size()) break;
  }
  if (canonical_t) return canonical(*canonical_t);
  try {
    return Vocabulary(std::move(symbols));
  } catch (const std::invalid_argument& e) {
    throw ParseError(line_no, e.what());
  }
}

std::string Vocabulary::to_text() const {
  std::string out;
  for (const auto& s : symbols_) out += s.name + " " + std::to_string(s.arity) + "\n";
  return out;
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].name == name) return i;
  return std::nullopt;
}

int Vocabulary::max_arity() const {
  int m = 1;
  for (const auto& s : symbols_) m = std::max(m, s.arity);
  return m;
}

std::vector<int> Vocabulary::signature() const {
  std::vector<int> sig(static_cast<std::size_t>(max_arity()), 0);
  for (const auto& s : symbols_) ++sig[static_cast<std::size_t>(s.arity - 1)];
  return sig;
}

bool Vocabulary::monic() const { return signature().back() == 1; }

std::size_t Vocabulary::max_symbol() const {
  const int m = max_arity();
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].arity == m) return i;
  return 0;
}

std::string_view to_string(TupleMode mode) {
  switch (mode) {
    case TupleMode::set: return "set";
    case TupleMode::multiset: return "multiset";
    case TupleMode::mixed: return "mixed";
  }
  return "?";
}

TupleMode parse_mode(std::string_view text) {
  if (text == "set") return TupleMode::set;
  if (text == "multiset") return TupleMode::multiset;
  throw std::invalid_argument("unknown tuple mode '" + std::string(text) + "' (expected set|multiset)");
}

// ----------------------------------------------------------------------- Fim


namespace {

// symbol in the top 16 bits, then up to eight 6-bit points.
std::uint64_t element_key(std::size_t symbol, std::span<const int> sorted) {
  std::uint64_t key = static_cast<std::uint64_t>(symbol) << 48;
  for (std::size_t i = 0; i < sorted.size(); ++i)
    key |= static_cast<std::uint64_t>(sorted[i]) << (6 * i);
  return key;
}

void for_each_tuple(int dim, int r, const std::vector<int>& caps,
                    const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> tuple;
  tuple.reserve(static_cast<std::size_t>(r));
  std::function<void(int, int)> rec = [&](int start, int used) {
    if (static_cast<int>(tuple.size()) == r) {
      fn(tuple);
      return;
    }
    for (int a = start; a <= dim; ++a) {
      const int uses = (a == start) ? used : 0;
      if (uses >= caps[static_cast<std::size_t>(a - 1)]) continue;
      tuple.push_back(a);
      rec(a, uses + 1);
      tuple.pop_back();
    }
  };
  rec(1, 0);
}

}  // namespace

std::shared_ptr<const Fim::Data> Fim::build(Vocabulary vocab, std::vector<int> caps, TupleMode mode) {
  if (caps.size() > static_cast<std::size_t>(kMaxDim))
    throw std::invalid_argument("fim dimension exceeds " + std::to_string(kMaxDim));
  for (int c : caps)
    if (c < 1) throw std::invalid_argument("multiplicity caps must be positive");
  auto data = std::make_shared<Data>();
  data->vocab = std::move(vocab);
  data->caps = std::move(caps);
  data->mode = mode;
  const int dim = static_cast<int>(data->caps.size());
  for (int a = 1; a <= dim; ++a) {
    const int t[1] = {a};
    data->index.emplace(element_key(0, t), data->elements.size());
    data->elements.push_back(Element{0, {a}, point_bit(a)});
  }
  for (std::size_t s = 1; s < data->vocab.size(); ++s) {
    for_each_tuple(dim, data->vocab[s].arity, data->caps, [&](const std::vector<int>& tuple) {
      data->index.emplace(element_key(s, tuple), data->elements.size());
      data->elements.push_back(Element{static_cast<int>(s), tuple, mask_of(tuple)});
    });
  }
  return data;
}

Fim::Fim(Vocabulary vocab, int dim, TupleMode mode) {
  if (dim < 0) throw std::invalid_argument("fim dimension must be >= 0");
  if (mode == TupleMode::mixed) throw std::invalid_argument("use Fim::with_caps for mixed caps");
  const int cap = mode == TupleMode::set ? 1 : vocab.max_arity();
  data_ = build(std::move(vocab), std::vector<int>(static_cast<std::size_t>(dim), cap), mode);
}

Fim Fim::with_caps(Vocabulary vocab, std::vector<int> caps) {
  const int top = vocab.max_arity();
  bool all_one = true;
  bool all_top = true;
  for (int& c : caps) {
    c = std::min(c, top);
    all_one = all_one && c == 1;
    all_top = all_top && c == top;
  }
  TupleMode mode = TupleMode::mixed;
  if (all_top) mode = TupleMode::multiset;
  if (all_one) mode = TupleMode::set;  // unary vocabularies read as set mode
  return Fim(build(std::move(vocab), std::move(caps), mode));
}

PointMask Fim::all_points() const {
  return dim() == 0 ? 0 : (dim() == 64 ? ~PointMask{0} : (PointMask{1} << dim()) - 1);
}

std::optional<std::size_t> Fim::find(std::size_t symbol, std::span<const int> tuple) const {
  if (symbol >= vocab().size()) return std::nullopt;
  if (static_cast<int>(tuple.size()) != vocab()[symbol].arity) return std::nullopt;
  std::vector<int> sorted(tuple.begin(), tuple.end());
  std::sort(sorted.begin(), sorted.end());
  for (int a : sorted)
    if (a < 1 || a > dim()) return std::nullopt;
  auto it = data_->index.find(element_key(symbol, sorted));
  if (it == data_->index.end()) return std::nullopt;
  return it->second;
}

std::size_t Fim::index_of(std::size_t symbol, std::span<const int> tuple) const {
  auto i = find(symbol, tuple);
  if (!i) throw std::out_of_range("no such element in fim");
  return *i;
}

bool Fim::admissible(std::span<const int> sorted) const {
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const int a = sorted[i];
    if (a < 1 || a > dim()) return false;
    if (static_cast<int>(j - i) > caps()[static_cast<std::size_t>(a - 1)]) return false;
    i = j;
  }
  return true;
}

bool Fim::realizes_all(PointMask w) const {
  if (w == 0) return false;
  const int top = vocab().max_arity();
  int total = 0;
  for (int a : points_of(w)) total += std::min(caps()[static_cast<std::size_t>(a - 1)], top);
  return total >= top;
}

int Fim::min_support() const {
  std::vector<int> c = caps();
  std::sort(c.rbegin(), c.rend());
  const int top = vocab().max_arity();
  int total = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    total += std::min(c[i], top);
    if (total >= top) return static_cast<int>(i + 1);
  }
  return 0;
}

std::string Fim::describe(std::size_t i) const {
  const Element& e = element(i);
  if (e.is_point()) return std::to_string(e.base[0]);
  std::string s = vocab()[static_cast<std::size_t>(e.symbol)].name + "(";
  for (std::size_t j = 0; j < e.base.size(); ++j) s += (j ? "," : "") + std::to_string(e.base[j]);
  return s + ")";
}

std::vector<std::size_t> closure(const Fim& m, PointMask a) {
  if ((a & ~m.all_points()) != 0) throw std::invalid_argument("closure: set is not a subset of the points");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (in_closure(m, i, a)) out.push_back(i);
  return out;
}

BigNat p_tau(const Vocabulary& vocab, std::uint64_t x, TupleMode mode) {
  if (mode == TupleMode::mixed) throw std::invalid_argument("p_tau is defined for set and multiset modes");
  BigNat total = x;
  for (std::size_t s = 1; s < vocab.size(); ++s) {
    const auto r = static_cast<std::uint64_t>(vocab[s].arity);
    total += mode == TupleMode::set ? binomial(BigNat(x), r) : multichoose(BigNat(x), r);
  }
  return total;
}

std::vector<std::size_t> extend_hom(std::span<const int> f, const Fim& m, const Fim& n,
                                    bool order_preserving) {
  if (!(m.vocab() == n.vocab())) throw std::invalid_argument("extend_hom: vocabularies differ");
  if (static_cast<int>(f.size()) != m.dim())
    throw std::invalid_argument("extend_hom: point map must be total on the points of M");
  for (int b : f)
    if (b < 1 || b > n.dim()) throw std::invalid_argument("extend_hom: point image outside N");
  if (order_preserving) {
    for (std::size_t i = 1; i < f.size(); ++i)
      if (f[i - 1] >= f[i]) throw std::invalid_argument("extend_hom: point map is not order preserving");
  }
  std::vector<std::size_t> out(m.size());
  std::vector<int> image;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Element& e = m.element(i);
    image.clear();
    for (int a : e.base) image.push_back(f[static_cast<std::size_t>(a - 1)]);
    auto j = n.find(static_cast<std::size_t>(e.symbol), image);
    if (!j) {
      std::sort(image.begin(), image.end());
      std::string t;
      for (std::size_t q = 0; q < image.size(); ++q) t += (q ? "," : "") + std::to_string(image[q]);
      throw HomError(i, "extend_hom: image of " + m.describe(i) + " is " +
                            m.vocab()[static_cast<std::size_t>(e.symbol)].name + "(" + t +
                            "), which the target does not contain (" +
                            std::string(to_string(n.mode())) + " mode)");
    }
    out[i] = *j;
  }
  return out;
}

// --------------------------------------------------------- derived vocabulary

Vocabulary DerivedVocabulary::vocabulary() const {
  std::vector<Symbol> symbols;
  symbols.reserve(pieces.size());
  for (const Piece& p : pieces) {
    std::string name = base[p.symbol].name;
    if (!p.left.empty() || !p.right.empty()) {
      name += "[";
      for (std::size_t i = 0; i < p.left.size(); ++i) name += (i ? "," : "") + std::to_string(p.left[i]);
      name += "|";
      for (std::size_t i = 0; i < p.right.size(); ++i) name += (i ? "," : "") + std::to_string(p.right[i]);
      name += "]";
    }
    symbols.push_back({std::move(name), p.arity});
  }
  return Vocabulary(std::move(symbols));
}

namespace {

// Nondecreasing (or strictly increasing) tuples of each length < limit over [lo, hi].
std::vector<std::vector<std::vector<int>>> parameter_tuples(int lo, int hi, int limit, bool strict) {
  std::vector<std::vector<std::vector<int>>> by_len(static_cast<std::size_t>(limit));
  if (limit == 0) return by_len;
  by_len[0].push_back({});
  for (int len = 1; len < limit; ++len) {
    for (const auto& prev : by_len[static_cast<std::size_t>(len - 1)]) {
      const int start = prev.empty() ? lo : prev.back() + (strict ? 1 : 0);
      for (int a = start; a <= hi; ++a) {
        auto t = prev;
        t.push_back(a);
        by_len[static_cast<std::size_t>(len)].push_back(std::move(t));
      }
    }
  }
  return by_len;
}

}  // namespace

DerivedVocabulary derive_vocabulary(const Vocabulary& vocab, int k0, int k1, TupleMode mode) {
  if (k0 < 0 || k1 < 0) throw std::invalid_argument("derive_vocabulary: k0, k1 must be >= 0");
  if (mode == TupleMode::mixed) throw std::invalid_argument("derive_vocabulary: mode must be set or multiset");
  const bool strict = mode == TupleMode::set;
  const int top = vocab.max_arity();
  const auto left = parameter_tuples(1, k0, top, strict);
  const auto right = parameter_tuples(k0 + 1, k0 + k1, top, strict);
  DerivedVocabulary out{vocab, k0, k1, {}};
  for (std::size_t s = 0; s < vocab.size(); ++s) {
    const int r = vocab[s].arity;
    for (int j = 0; j < r; ++j) {
      for (int l1 = 0; l1 <= j; ++l1) {
        const int l2 = j - l1;
        for (const auto& a1 : left[static_cast<std::size_t>(l1)])
          for (const auto& a2 : right[static_cast<std::size_t>(l2)])
            out.pieces.push_back(Piece{s, a1, a2, r - j});
      }
    }
  }
  return out;
}

}  // namespace hjp
