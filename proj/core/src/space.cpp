#include "hjp/space.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace hjp {

AlphabetSeq::AlphabetSeq(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  for (int n : sizes_)
    if (n < 1 || n > kMaxLetters)
      throw std::invalid_argument("alphabet sizes must lie in 1.." + std::to_string(kMaxLetters));
}

AlphabetSeq AlphabetSeq::uniform(const Vocabulary& vocab, int n) {
  return AlphabetSeq(std::vector<int>(vocab.size(), n));
}

// -------------------------------------------------------------------- types

TypeSet::TypeSet(std::vector<LambdaType> types) : types_(std::move(types)) {
  if (types_.empty()) throw std::invalid_argument("type sets must be nonempty");
}

TypeSet TypeSet::full(const AlphabetSeq& alphabets) {
  std::vector<LambdaType> out;
  LambdaType p(alphabets.symbols(), 0);
  while (true) {
    out.push_back(p);
    std::size_t i = p.size();
    while (i > 0 && p[i - 1] + 1 >= alphabets[i - 1]) p[--i] = 0;
    if (i == 0) break;
    ++p[i - 1];
  }
  return TypeSet(std::move(out));
}

TypeSet TypeSet::constant(const AlphabetSeq& alphabets) {
  int n = kMaxLetters;
  for (int s : alphabets.sizes()) n = std::min(n, s);
  std::vector<LambdaType> out;
  for (int x = 0; x < n; ++x) out.emplace_back(alphabets.symbols(), static_cast<Letter>(x));
  return TypeSet(std::move(out));
}

bool TypeSet::contains(const LambdaType& p) const {
  return std::find(types_.begin(), types_.end(), p) != types_.end();
}

std::vector<std::pair<LambdaType, LambdaType>> type_pairs(const Vocabulary& vocab,
                                                          const AlphabetSeq& alphabets) {
  const TypeSet all = TypeSet::full(alphabets);
  std::vector<std::pair<LambdaType, LambdaType>> out;
  for (const auto& p : all.types())
    for (const auto& q : all.types()) {
      bool agree = true;
      for (std::size_t s = 0; s < vocab.size() && agree; ++s)
        if (vocab[s].arity > 1 && p[s] != q[s]) agree = false;
      if (agree) out.emplace_back(p, q);
    }
  return out;
}

// -------------------------------------------------------------------- space

BigNat space_size(const Fim& m, const AlphabetSeq& alphabets) {
  BigNat n = 1;
  for (const Element& e : m.elements()) n *= alphabets[static_cast<std::size_t>(e.symbol)];
  return n;
}

Space::Space(Fim m, AlphabetSeq alphabets) {
  if (alphabets.symbols() != m.vocab().size())
    throw std::invalid_argument("alphabet sequence has " + std::to_string(alphabets.symbols()) +
                                " entries for a vocabulary of " + std::to_string(m.vocab().size()) +
                                " symbols");
  auto data = std::make_shared<Data>(Data{std::move(m), std::move(alphabets), {}, {}, 1, false});
  const Fim& fim = data->fim;
  data->radix.reserve(fim.size());
  for (const Element& e : fim.elements())
    data->radix.push_back(data->alphabets[static_cast<std::size_t>(e.symbol)]);
  data->size = space_size(fim, data->alphabets);
  data->indexable = data->size <= std::numeric_limits<std::uint64_t>::max();
  if (data->indexable) {
    data->weight.assign(fim.size(), 1);
    std::uint64_t w = 1;
    for (std::size_t i = fim.size(); i-- > 0;) {
      data->weight[i] = w;
      w *= static_cast<std::uint64_t>(data->radix[i]);
    }
  }
  data_ = std::move(data);
}

std::uint64_t Space::size() const {
  if (!indexable())
    throw std::overflow_error("space has " + to_short_string(size_big()) + " points, beyond 64-bit indexing");
  return data_->size.convert_to<std::uint64_t>();
}

std::uint64_t Space::index(std::span<const Letter> point) const {
  if (!indexable()) (void)size();
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < point.size(); ++i) idx += point[i] * data_->weight[i];
  return idx;
}

void Space::decode(std::uint64_t index, std::span<Letter> out) const {
  if (!indexable()) (void)size();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<Letter>(index / data_->weight[i]);
    index %= data_->weight[i];
  }
}

SpacePoint Space::point(std::uint64_t index) const {
  if (index >= size()) throw std::out_of_range("space point index out of range");
  SpacePoint p(elements());
  decode(index, p);
  return p;
}

bool Space::contains(std::span<const Letter> point) const {
  if (point.size() != elements()) return false;
  for (std::size_t i = 0; i < point.size(); ++i)
    if (point[i] >= radix(i)) return false;
  return true;
}

std::string Space::describe(std::span<const Letter> point) const {
  std::string s;
  for (std::size_t i = 0; i < point.size(); ++i) {
    if (i) s += ' ';
    s += fim().describe(i) + ":" + std::to_string(point[i]);
  }
  return s;
}

// -------------------------------------------------------------------- lines

bool admissible_support(const Fim& m, PointMask support) {
  return (support & ~m.all_points()) == 0 && m.realizes_all(support);
}

void pt_line_into(const Space& v, const Line& line, const LambdaType& p, std::span<Letter> out) {
  const Fim& m = v.fim();
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Element& e = m.element(i);
    out[i] = (e.base_mask & ~line.support) == 0 ? p[static_cast<std::size_t>(e.symbol)] : line.fixed[i];
  }
}

SpacePoint pt_line(const Space& v, const Line& line, const LambdaType& p) {
  if (p.size() != v.alphabets().symbols()) throw std::invalid_argument("type has the wrong length");
  for (std::size_t s = 0; s < p.size(); ++s)
    if (p[s] >= v.alphabets()[s]) throw std::invalid_argument("type letter outside its alphabet");
  if (line.types && !line.types->contains(p)) throw std::invalid_argument("type is not in the line's type set");
  SpacePoint out(v.elements());
  pt_line_into(v, line, p, out);
  return out;
}

std::vector<SpacePoint> line_points(const Space& v, const Line& line) {
  std::vector<SpacePoint> out;
  auto emit = [&](const TypeSet& ts) {
    for (const auto& p : ts.types()) {
      SpacePoint x(v.elements());
      pt_line_into(v, line, p, x);
      out.push_back(std::move(x));
    }
  };
  if (line.types) emit(*line.types);
  else emit(TypeSet::full(v.alphabets()));
  return out;
}

bool is_line(const Space& v, const Line& line) {
  const Fim& m = v.fim();
  if (!admissible_support(m, line.support)) return false;
  if (line.fixed.size() != m.size()) return false;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (in_closure(m, i, line.support)) {
      if (line.fixed[i] != 0) return false;
    } else if (line.fixed[i] >= v.radix(i)) {
      return false;
    }
  }
  return true;
}

std::uint64_t for_each_line(const Space& v, const std::function<bool(const Line&)>& fn,
                            std::shared_ptr<const TypeSet> types) {
  const Fim& m = v.fim();
  if (m.dim() == 0) return 0;
  std::uint64_t visited = 0;
  std::vector<std::size_t> outside;
  const PointMask top = m.all_points();
  for (PointMask w = 1; w != 0 && w <= top; ++w) {
    if (!admissible_support(m, w)) continue;
    outside.clear();
    for (std::size_t i = 0; i < m.size(); ++i)
      if (!in_closure(m, i, w)) outside.push_back(i);
    Line line{w, SpacePoint(m.size(), 0), types};
    while (true) {
      ++visited;
      if (!fn(line)) return visited;
      std::size_t j = outside.size();
      bool done = true;
      while (j > 0) {
        --j;
        const std::size_t e = outside[j];
        if (line.fixed[e] + 1 < v.radix(e)) {
          ++line.fixed[e];
          done = false;
          break;
        }
        line.fixed[e] = 0;
      }
      if (done) break;
    }
  }
  return visited;
}

std::vector<Line> enumerate_lines(const Space& v, std::shared_ptr<const TypeSet> types) {
  std::vector<Line> out;
  for_each_line(v, [&](const Line& l) { out.push_back(l); return true; }, std::move(types));
  return out;
}

BigNat count_lines(const Space& v) {
  const Fim& m = v.fim();
  BigNat total = 0;
  if (m.dim() == 0) return total;
  for (PointMask w = 1; w <= m.all_points(); ++w) {
    if (!admissible_support(m, w)) continue;
    BigNat n = 1;
    for (std::size_t i = 0; i < m.size(); ++i)
      if (!in_closure(m, i, w)) n *= v.radix(i);
    total += n;
  }
  return total;
}

std::string describe_support(PointMask support) {
  std::string s = "{";
  bool first = true;
  for (int a : points_of(support)) {
    if (!first) s += ',';
    s += std::to_string(a);
    first = false;
  }
  return s + "}";
}

std::string describe_fixed(const Space& v, PointMask support, std::span<const Letter> fixed) {
  std::string s;
  const Fim& m = v.fim();
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (in_closure(m, i, support)) continue;
    if (!s.empty()) s += ',';
    s += m.describe(i) + "=" + std::to_string(fixed[i]);
  }
  return s.empty() ? "-" : s;
}

// ---------------------------------------------------------------- subspaces

PointMask Subspace::support() const {
  PointMask u = 0;
  for (PointMask w : blocks) u |= w;
  return u;
}

Subspace make_subspace(const Space& v, std::vector<PointMask> blocks, SpacePoint fixed) {
  Subspace s;
  s.blocks = std::move(blocks);
  s.fixed = std::move(fixed);
  for (int j = 1; j <= s.dim(); ++j) s.coordinate.push_back(j);
  s.convex = true;
  for (std::size_t l = 0; l + 1 < s.blocks.size(); ++l) {
    if (s.blocks[l] == 0 || s.blocks[l + 1] == 0) continue;
    const int hi = 64 - std::countl_zero(s.blocks[l]);
    const int lo = std::countr_zero(s.blocks[l + 1]) + 1;
    if (hi >= lo) s.convex = false;
  }
  validate_subspace(v, s);
  return s;
}

Fim subspace_target(const Fim& m, const Subspace& s) {
  std::vector<int> caps(s.blocks.size(), 0);
  for (std::size_t l = 0; l < s.blocks.size(); ++l) {
    int total = 0;
    for (int a : points_of(s.blocks[l])) total += m.caps()[static_cast<std::size_t>(a - 1)];
    caps[static_cast<std::size_t>(s.coordinate[l] - 1)] = total;
  }
  return Fim::with_caps(m.vocab(), std::move(caps));
}

void validate_subspace(const Space& v, const Subspace& s) {
  const Fim& m = v.fim();
  if (s.coordinate.size() != s.blocks.size())
    throw std::invalid_argument("subspace needs one coordinate per block");
  PointMask seen = 0;
  for (PointMask w : s.blocks) {
    if (w == 0) throw std::invalid_argument("subspace block is empty");
    if ((w & ~m.all_points()) != 0) throw std::invalid_argument("subspace block leaves the fim");
    if ((w & seen) != 0) throw std::invalid_argument("subspace blocks are not disjoint");
    seen |= w;
  }
  std::vector<int> coords = s.coordinate;
  std::sort(coords.begin(), coords.end());
  for (std::size_t j = 0; j < coords.size(); ++j)
    if (coords[j] != static_cast<int>(j + 1))
      throw std::invalid_argument("subspace coordinates must be a permutation of 1..m");
  if (s.convex) {
    for (std::size_t l = 0; l < s.blocks.size(); ++l)
      if (s.coordinate[l] != static_cast<int>(l + 1))
        throw std::invalid_argument("convex subspace needs identity coordinates");
    for (std::size_t l = 0; l + 1 < s.blocks.size(); ++l) {
      const int hi = 64 - std::countl_zero(s.blocks[l]);
      const int lo = std::countr_zero(s.blocks[l + 1]) + 1;
      if (hi >= lo) throw std::invalid_argument("convex subspace blocks must be order separated");
    }
  }
  if (s.fixed.size() != m.size()) throw std::invalid_argument("subspace fixed part has the wrong length");
  const PointMask u = seen;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (in_closure(m, i, u)) {
      if (s.fixed[i] != 0) throw std::invalid_argument("subspace fixed part must be zero on cl(∪W)");
    } else if (s.fixed[i] >= v.radix(i)) {
      throw std::invalid_argument("subspace fixed letter outside its alphabet");
    }
  }
}

std::vector<std::size_t> collapse_map(const Fim& m, const Fim& k, const Subspace& s) {
  std::vector<int> coord_of(static_cast<std::size_t>(m.dim()) + 1, 0);
  for (std::size_t l = 0; l < s.blocks.size(); ++l)
    for (int a : points_of(s.blocks[l])) coord_of[static_cast<std::size_t>(a)] = s.coordinate[l];
  const PointMask u = s.support();
  std::vector<std::size_t> out(m.size(), npos);
  std::vector<int> image;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!in_closure(m, i, u)) continue;
    const Element& e = m.element(i);
    image.clear();
    for (int a : e.base) image.push_back(coord_of[static_cast<std::size_t>(a)]);
    auto j = k.find(static_cast<std::size_t>(e.symbol), image);
    if (!j) throw HomError(i, "collapse image of " + m.describe(i) + " is missing from the target");
    out[i] = *j;
  }
  return out;
}

SpacePoint pt_subspace(const Space& v, const Subspace& s, std::span<const Letter> rho) {
  validate_subspace(v, s);
  const Fim k = subspace_target(v.fim(), s);
  if (rho.size() != k.size()) throw std::invalid_argument("pt_subspace: point of the wrong space");
  const auto f = collapse_map(v.fim(), k, s);
  SpacePoint out(s.fixed);
  for (std::size_t i = 0; i < out.size(); ++i)
    if (f[i] != npos) out[i] = rho[f[i]];
  return out;
}

void for_each_subspace_point(const Space& v, const Subspace& s,
                             const std::function<bool(std::span<const Letter>)>& fn) {
  validate_subspace(v, s);
  const Fim k = subspace_target(v.fim(), s);
  const Space ks(k, v.alphabets());
  const auto f = collapse_map(v.fim(), k, s);
  SpacePoint rho(ks.elements(), 0);
  SpacePoint out(s.fixed);
  while (true) {
    for (std::size_t i = 0; i < out.size(); ++i)
      if (f[i] != npos) out[i] = rho[f[i]];
    if (!fn(out)) return;
    std::size_t j = rho.size();
    bool done = true;
    while (j > 0) {
      --j;
      if (rho[j] + 1 < ks.radix(j)) {
        ++rho[j];
        done = false;
        break;
      }
      rho[j] = 0;
    }
    if (done) return;
  }
}

std::string describe_subspace(const Space& v, const Subspace& s) {
  std::string out = "blocks=";
  for (std::size_t l = 0; l < s.blocks.size(); ++l) {
    if (l) out += ';';
    out += describe_support(s.blocks[l]);
    if (!s.convex) out += "->" + std::to_string(s.coordinate[l]);
  }
  out += " fixed=" + describe_fixed(v, s.support(), s.fixed);
  return out;
}

}  // namespace hjp
