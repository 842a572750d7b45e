#include "hjp/reductions.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace hjp {

namespace {

// compositions of r into parts >= 2, lexicographic
void compositions(int r, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (r == 0) {
    out.push_back(cur);
    return;
  }
  for (int p = 2; p <= r; ++p) {
    if (r - p == 1) continue;
    cur.push_back(p);
    compositions(r - p, cur, out);
    cur.pop_back();
  }
}

std::string parts_name(const std::string& name, const std::vector<int>& parts) {
  std::string s = name + "[";
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + std::to_string(parts[i]);
  return s + "]";
}

std::vector<int> runs_of(const std::vector<int>& base, std::vector<int>& values) {
  std::vector<int> runs;
  values.clear();
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (i > 0 && base[i] == base[i - 1]) {
      ++runs.back();
    } else {
      runs.push_back(1);
      values.push_back(base[i]);
    }
  }
  return runs;
}

}  // namespace

// ------------------------------------------------------------ arity halving

std::optional<std::size_t> ArityReduction::target_of(std::size_t symbol, std::span<const int> parts) const {
  for (std::size_t t = 0; t < origin.size(); ++t)
    if (origin[t].symbol == symbol && std::equal(parts.begin(), parts.end(), origin[t].parts.begin(),
                                                 origin[t].parts.end()))
      return t;
  return std::nullopt;
}

Fim ArityReduction::source_fim(int dim) const { return Fim(source, dim, TupleMode::multiset); }
Fim ArityReduction::target_fim(int dim) const { return Fim(target, dim, TupleMode::set); }
Space ArityReduction::source_space(int dim) const { return Space(source_fim(dim), source_alphabets); }
Space ArityReduction::target_space(int dim) const { return Space(target_fim(dim), target_alphabets); }

ArityReduction arity_reduce(const Vocabulary& vocab, const AlphabetSeq& alphabets) {
  if (alphabets.symbols() != vocab.size()) throw std::invalid_argument("alphabet sequence does not fit the vocabulary");
  const int top = vocab.max_arity();
  if (top <= 1) throw std::invalid_argument("arity_reduce needs a symbol of arity > 1");
  ArityReduction red;
  red.source = vocab;
  red.source_alphabets = alphabets;
  red.identified = vocab.max_symbol();
  red.origin.push_back({red.identified, {top}});

  std::vector<Symbol> syms;
  std::vector<int> sizes{alphabets[red.identified]};
  for (std::size_t s = 0; s < vocab.size(); ++s) {
    const int r = vocab[s].arity;
    if (r < 2) continue;
    std::vector<std::vector<int>> comps;
    std::vector<int> cur;
    compositions(r, cur, comps);
    for (auto& e : comps) {
      if (s == red.identified && e.size() == 1) continue;
      syms.push_back({parts_name(vocab[s].name, e), static_cast<int>(e.size())});
      sizes.push_back(alphabets[s]);
      red.origin.push_back({s, std::move(e)});
    }
  }
  red.target = Vocabulary(std::move(syms));
  red.target_alphabets = AlphabetSeq(std::move(sizes));
  return red;
}

std::vector<std::size_t> ArityReduction::element_map(const Fim& m, const Fim& mstar) const {
  std::vector<std::size_t> g(m.size(), npos);
  std::vector<int> values;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Element& e = m.element(i);
    if (source[static_cast<std::size_t>(e.symbol)].arity < 2) continue;
    const auto runs = runs_of(e.base, values);
    if (std::any_of(runs.begin(), runs.end(), [](int r) { return r < 2; })) continue;
    const auto t = target_of(static_cast<std::size_t>(e.symbol), runs);
    if (!t) continue;
    g[i] = mstar.index_of(*t, values);
  }
  return g;
}

Colouring ArityReduction::induced(const Space& v, const Space& vstar, const Colouring& d) const {
  if (v.fim().mode() != TupleMode::multiset) throw std::invalid_argument("arity_reduce works on multiset fims");
  auto g = std::make_shared<const std::vector<std::size_t>>(element_map(v.fim(), vstar.fim()));
  const std::size_t n = v.elements();
  return callback_colouring(
      [g, n, d](std::span<const Letter> nu) {
        SpacePoint eta(n, 0);
        for (std::size_t b = 0; b < n; ++b)
          if ((*g)[b] != npos) eta[b] = nu[(*g)[b]];
        return d(eta);
      },
      d.colours);
}

Line lift_line_4_4(const ArityReduction& red, const Space& v, const Space& vstar, const Line& lstar) {
  if (v.fim().mode() != TupleMode::multiset) throw std::invalid_argument("arity_reduce works on multiset fims");
  if (v.fim().dim() != vstar.fim().dim()) throw std::invalid_argument("lift: dimension mismatch");
  if (!is_line(vstar, lstar)) throw std::invalid_argument("lift: not a line of the reduced space");
  const auto g = red.element_map(v.fim(), vstar.fim());
  Line l;
  l.support = lstar.support;
  l.fixed.assign(v.elements(), 0);
  for (std::size_t b = 0; b < v.elements(); ++b) {
    if (in_closure(v.fim(), b, l.support)) continue;
    if (g[b] != npos) l.fixed[b] = lstar.fixed[g[b]];
  }
  return l;
}

LambdaType arity_type(const ArityReduction& red, const LambdaType& p) {
  LambdaType q(red.origin.size());
  for (std::size_t t = 0; t < q.size(); ++t) q[t] = p[red.origin[t].symbol];
  return q;
}

// ------------------------------------------------------------- collapse step

CollapseSetup collapse_setup(const Space& v, int ell, int k0, std::optional<CollapseFill> fill) {
  const Fim& m = v.fim();
  const int k = m.dim();
  if (m.mode() == TupleMode::mixed) throw std::invalid_argument("collapse: fim must be in set or multiset mode");
  if (ell < 0 || k0 <= ell) throw std::invalid_argument("collapse: need k0 > ell >= 0");
  if (k < k0) throw std::invalid_argument("collapse: dimension must be k0 + k1 - 1 with k1 >= 1");
  const Vocabulary& tau = m.vocab();
  if (fill) {
    if (fill->symbol >= tau.size()) throw std::invalid_argument("collapse: unknown H");
    if (fill->alpha >= v.alphabets()[fill->symbol]) throw std::invalid_argument("collapse: alpha outside Λ_H");
  }

  CollapseSetup s{.v = v,
                  .ell = ell,
                  .k0 = k0,
                  .k1 = k - k0 + 1,
                  .fill = fill,
                  .derived = {},
                  .tau_star = {},
                  .alphabets_star = {},
                  .star_piece = {},
                  .k = Fim(tau, k0 - 1, m.mode()),
                  .vk = Space(Fim(tau, 0), v.alphabets()),
                  .k_to_m = {},
                  .n = Fim(tau, 0),
                  .vstar = Space(Fim(tau, 0), v.alphabets()),
                  .n_to_m = {},
                  .m_to_n = {},
                  .in_astar = {},
                  .kplus = Fim(tau, 0),
                  .u = Space(Fim(tau, 0), v.alphabets()),
                  .g = {}};
  const int a0 = k0 - ell - 1;  // |w0|
  for (int a = 1; a <= k; ++a) {
    if (a <= a0) s.w0 |= point_bit(a);
    else if (a <= a0 + s.k1) s.w1 |= point_bit(a);
    else s.w2 |= point_bit(a);
  }
  const auto k_point = [&](int j) { return j <= a0 ? j : j + s.k1; };  // K point -> M point

  // K
  s.vk = Space(s.k, v.alphabets());
  for (std::size_t i = 0; i < s.k.size(); ++i) {
    const Element& e = s.k.element(i);
    std::vector<int> t;
    for (int j : e.base) t.push_back(k_point(j));
    s.k_to_m.push_back(m.index_of(static_cast<std::size_t>(e.symbol), t));
  }

  // τ* and N
  s.derived = derive_vocabulary(tau, a0, ell, m.mode());
  const Vocabulary full = s.derived.vocabulary();
  std::vector<Symbol> syms;
  std::vector<int> sizes;
  for (std::size_t p = 0; p < s.derived.pieces.size(); ++p) {
    const Piece& pc = s.derived.pieces[p];
    if (fill && pc.symbol == fill->symbol && pc.left.empty() && pc.right.empty()) continue;
    s.star_piece.push_back(p);
    if (p > 0) syms.push_back(full[p]);
    sizes.push_back(v.alphabets()[pc.symbol]);
  }
  s.tau_star = Vocabulary(std::move(syms));
  s.alphabets_star = AlphabetSeq(std::move(sizes));
  s.n = Fim(s.tau_star, s.k1, m.mode());
  s.vstar = Space(s.n, s.alphabets_star);
  s.m_to_n.assign(m.size(), npos);
  s.in_astar.assign(m.size(), 0);
  for (std::size_t i = 0; i < s.n.size(); ++i) {
    const Element& e = s.n.element(i);
    const Piece& pc = s.derived.pieces[s.star_piece[static_cast<std::size_t>(e.symbol)]];
    std::vector<int> t;
    for (int j : pc.left) t.push_back(k_point(j));
    for (int b : e.base) t.push_back(a0 + b);
    for (int j : pc.right) t.push_back(k_point(j));
    const std::size_t mi = m.index_of(pc.symbol, t);
    s.n_to_m.push_back(mi);
    s.m_to_n[mi] = i;
  }
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Element& e = m.element(i);
    if (fill && static_cast<std::size_t>(e.symbol) == fill->symbol && (e.base_mask & ~s.w1) == 0)
      s.in_astar[i] = 1;
  }

  // K⁺ and g
  std::vector<int> caps;
  const int bstar = a0 + 1;
  for (int j = 1; j <= k0; ++j) {
    if (j == bstar) caps.push_back(tau.max_arity());
    else caps.push_back(m.caps()[static_cast<std::size_t>((j < bstar ? j : j + s.k1 - 1) - 1)]);
  }
  s.kplus = Fim::with_caps(tau, std::move(caps));
  s.u = Space(s.kplus, v.alphabets());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Element& e = m.element(i);
    std::vector<int> t;
    for (int a : e.base) t.push_back(a <= a0 ? a : (a <= a0 + s.k1 ? bstar : a - s.k1 + 1));
    s.g.push_back(s.kplus.index_of(static_cast<std::size_t>(e.symbol), t));
  }
  return s;
}

namespace {

// c^n, or 0 when it overflows
Colour checked_power(Colour c, std::uint64_t n) {
  Colour r = 1;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (c != 0 && r > std::numeric_limits<Colour>::max() / c) return 0;
    r *= c;
  }
  return r;
}

PointMask to_m_support(const CollapseSetup& s, PointMask n_support) {
  return n_support << (s.k0 - s.ell - 1);
}

bool active(const CollapseSetup& s, std::size_t b, PointMask supp_m) {
  return (s.v.fim().element(b).base_mask & s.w1 & ~supp_m) == 0;
}

Letter inactive_letter(const CollapseSetup& s, const Line& lstar, std::size_t b) {
  if (s.in_astar[b]) return s.fill->alpha;
  return lstar.fixed[s.m_to_n[b]];
}

}  // namespace

Colour collapse_colour_count(const CollapseSetup& s, Colour c) { return checked_power(c, s.vk.size()); }

Colouring collapse_colouring(const CollapseSetup& s, const Colouring& d) {
  const std::uint64_t nk = s.vk.size();
  const Colour cstar = collapse_colour_count(s, d.colours);
  if (cstar == 0) throw std::overflow_error("collapse: c^|Space(K)| does not fit in 64 bits");
  const Colour c = d.colours;
  auto sp = std::make_shared<const CollapseSetup>(s);
  return callback_colouring(
      [sp, d, nk, c](std::span<const Letter> eta) {
        const CollapseSetup& s = *sp;
        SpacePoint x(s.v.elements(), 0);
        for (std::size_t i = 0; i < eta.size(); ++i) x[s.n_to_m[i]] = eta[i];
        if (s.fill)
          for (std::size_t b = 0; b < x.size(); ++b)
            if (s.in_astar[b]) x[b] = s.fill->alpha;
        SpacePoint nu(s.vk.elements());
        Colour code = 0, place = 1;
        for (std::uint64_t idx = 0; idx < nk; ++idx) {
          s.vk.decode(idx, nu);
          for (std::size_t j = 0; j < nu.size(); ++j) x[s.k_to_m[j]] = nu[j];
          code += d(x) * place;
          if (idx + 1 < nk) place *= c;
        }
        return code;
      },
      cstar);
}

SpacePoint collapse_h(const CollapseSetup& s, const Line& lstar, std::span<const Letter> rho) {
  const PointMask supp = to_m_support(s, lstar.support);
  SpacePoint nu(s.v.elements());
  for (std::size_t b = 0; b < nu.size(); ++b)
    nu[b] = active(s, b, supp) ? rho[s.g[b]] : inactive_letter(s, lstar, b);
  return nu;
}

Subspace collapse_subspace(const CollapseSetup& s, const Line& lstar) {
  const PointMask supp = to_m_support(s, lstar.support);
  const int a0 = s.k0 - s.ell - 1;
  std::vector<PointMask> blocks;
  for (int j = 1; j <= s.k0; ++j) {
    if (j <= a0) blocks.push_back(point_bit(j));
    else if (j == a0 + 1) blocks.push_back(supp);
    else blocks.push_back(point_bit(j + s.k1 - 1));
  }
  SpacePoint fixed(s.v.elements(), 0);
  for (std::size_t b = 0; b < fixed.size(); ++b)
    if (!active(s, b, supp)) fixed[b] = inactive_letter(s, lstar, b);
  return make_subspace(s.v, std::move(blocks), std::move(fixed));
}

Colouring collapse_dcirc(const CollapseSetup& s, const Line& lstar, const Colouring& d) {
  auto sp = std::make_shared<const CollapseSetup>(s);
  auto ls = std::make_shared<const Line>(lstar);
  return callback_colouring([sp, ls, d](std::span<const Letter> rho) { return d(collapse_h(*sp, *ls, rho)); },
                            d.colours);
}

Line collapse_lift(const CollapseSetup& s, const Line& lstar, const Line& lcirc) {
  const PointMask supp = to_m_support(s, lstar.support);
  const int a0 = s.k0 - s.ell - 1;
  Line l;
  for (int j : points_of(lcirc.support)) {
    if (j <= a0) l.support |= point_bit(j);
    else if (j == a0 + 1) l.support |= supp;
    else l.support |= point_bit(j + s.k1 - 1);
  }
  l.fixed.assign(s.v.elements(), 0);
  for (std::size_t b = 0; b < l.fixed.size(); ++b) {
    if (in_closure(s.v.fim(), b, l.support)) continue;
    l.fixed[b] = active(s, b, supp) ? lcirc.fixed[s.g[b]] : inactive_letter(s, lstar, b);
  }
  return l;
}

bool line_monochromatic(const Space& v, const Line& line, const Colouring& d) {
  const auto pts = line_points(v, line);
  for (const auto& p : pts)
    if (d(p) != d(pts.front())) return false;
  return true;
}

CollapseOutcome collapse_step(const Space& v, const Colouring& d, int ell, int k0, std::optional<CollapseFill> fill,
                              const SearchOptions& opt, bool check_invariance) {
  const CollapseSetup s = collapse_setup(v, ell, k0, fill);
  if (check_invariance && !check_base_invariant(v, d, ell, 1))
    throw std::invalid_argument("collapse: colouring is not (ell,1)-base-invariant");
  CollapseOutcome out;
  const auto r1 = find_mono_line(s.vstar, collapse_colouring(s, d), nullptr, opt);
  out.status = r1.status;
  if (r1.status != SearchStatus::found) return out;
  out.lstar = r1.value->line;
  const auto r2 = find_mono_line(s.u, collapse_dcirc(s, *out.lstar, d), nullptr, opt);
  out.status = r2.status;
  if (r2.status != SearchStatus::found) return out;
  out.lcirc = r2.value->line;
  out.colour = r2.value->colour;
  out.lifted = collapse_lift(s, *out.lstar, *out.lcirc);

  // L must be exactly h(L°), type by type, and monochromatic under d
  bool ok = is_line(v, *out.lifted);
  if (ok) {
    const auto types = TypeSet::full(v.alphabets());
    for (const auto& p : types.types()) {
      const auto x = pt_line(v, *out.lifted, p);
      if (x != collapse_h(s, *out.lstar, pt_line(s.u, *out.lcirc, p)) || d(x) != out.colour) {
        ok = false;
        break;
      }
    }
  }
  out.verified = ok;
  return out;
}

// ------------------------------------------------------------- unary fixing

UnaryFix fix_unary_step(const Space& v, LambdaType pstar) {
  const Fim& m = v.fim();
  const Vocabulary& tau = m.vocab();
  if (pstar.size() != tau.size()) throw std::invalid_argument("fix_unary: type does not fit the vocabulary");
  for (std::size_t s = 0; s < tau.size(); ++s)
    if (pstar[s] >= v.alphabets()[s]) throw std::invalid_argument("fix_unary: letter outside its alphabet");
  std::vector<Symbol> syms;
  std::vector<int> sizes;
  std::vector<std::size_t> unary;
  for (std::size_t s = 0; s < tau.size(); ++s) {
    if (tau[s].arity != 1) continue;
    unary.push_back(s);
    if (s > 0) syms.push_back(tau[s]);
    sizes.push_back(v.alphabets()[s]);
  }
  const Fim mstar(Vocabulary(std::move(syms)), m.dim(), TupleMode::set);
  UnaryFix f{v, std::move(pstar), std::move(unary), Space(mstar, AlphabetSeq(std::move(sizes))), {}, {}};
  f.m_to_mstar.assign(m.size(), npos);
  for (std::size_t i = 0; i < mstar.size(); ++i) {
    const Element& e = mstar.element(i);
    const std::size_t mi = m.index_of(f.unary[static_cast<std::size_t>(e.symbol)], e.base);
    f.mstar_to_m.push_back(mi);
    f.m_to_mstar[mi] = i;
  }
  return f;
}

SpacePoint UnaryFix::h(std::span<const Letter> nu) const {
  SpacePoint x(v.elements());
  for (std::size_t b = 0; b < x.size(); ++b)
    x[b] = m_to_mstar[b] == npos ? pstar[static_cast<std::size_t>(v.fim().element(b).symbol)] : nu[m_to_mstar[b]];
  return x;
}

Colouring UnaryFix::induced(const Colouring& d) const {
  auto self = std::make_shared<const UnaryFix>(*this);
  return callback_colouring([self, d](std::span<const Letter> nu) { return d(self->h(nu)); }, d.colours);
}

Subspace UnaryFix::induced_subspace(const Subspace& sstar) const {
  validate_subspace(vstar, sstar);
  Subspace s{sstar.blocks, SpacePoint(v.elements(), 0), sstar.coordinate, sstar.convex};
  const PointMask w = sstar.support();
  for (std::size_t b = 0; b < v.elements(); ++b) {
    if (in_closure(v.fim(), b, w)) continue;
    s.fixed[b] = m_to_mstar[b] == npos ? pstar[static_cast<std::size_t>(v.fim().element(b).symbol)]
                                       : sstar.fixed[m_to_mstar[b]];
  }
  validate_subspace(v, s);
  return s;
}

}  // namespace hjp
