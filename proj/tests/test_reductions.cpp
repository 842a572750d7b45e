#include "doctest.h"
#include "oracles.hpp"

#include "hjp/reductions.hpp"

#include <algorithm>
#include <set>

using namespace hjp;

namespace {

// d(η) hashes η on the elements where none of the watched points occurs
// exactly once, so d is (ℓ,1)-base-invariant for the last ℓ points.
Colouring invariant_colouring(const Space& v, int ell, std::uint64_t seed, Colour c) {
  const Fim& m = v.fim();
  std::vector<char> keep(m.size(), 1);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (int a = m.dim() - ell + 1; a <= m.dim(); ++a)
      if (std::count(m.element(i).base.begin(), m.element(i).base.end(), a) == 1) keep[i] = 0;
  return callback_colouring(
      [keep, seed, c](std::span<const Letter> x) {
        std::uint64_t h = 0;
        for (std::size_t i = 0; i < x.size(); ++i)
          if (keep[i]) h = h * 257 + x[i] + 1;
        return splitmix64(seed, h) % c;
      },
      c);
}

// compositions counted by cut sets of {1..r-1}
int convex_relations(int r) {
  int n = 0;
  for (int cuts = 0; cuts < (1 << (r - 1)); ++cuts) {
    int last = 0;
    bool ok = true;
    for (int i = 1; i <= r; ++i) {
      if (i == r || (cuts >> (i - 1) & 1)) {
        if (i - last < 2) ok = false;
        last = i;
      }
    }
    n += ok;
  }
  return n;
}

std::set<std::uint64_t> index_set(const Space& v, const std::vector<SpacePoint>& pts) {
  std::set<std::uint64_t> s;
  for (const auto& p : pts) s.insert(v.index(p));
  return s;
}

}  // namespace

TEST_CASE("arity reduction vocabularies") {
  const auto t2 = Vocabulary::canonical(2);
  const auto r2 = arity_reduce(t2, AlphabetSeq({3, 2}));
  CHECK(r2.target.size() == 1);
  CHECK(r2.target_alphabets[0] == 2);

  const Vocabulary t4({{"F4", 4}});
  const auto r4 = arity_reduce(t4, AlphabetSeq::uniform(t4, 2));
  REQUIRE(r4.target.size() == 2);
  CHECK(r4.target[1].arity == 2);
  CHECK(r4.origin[1].parts == std::vector<int>{2, 2});

  const Vocabulary t3({{"F3", 3}});
  CHECK(arity_reduce(t3, AlphabetSeq::uniform(t3, 2)).target.size() == 1);

  CHECK_THROWS(arity_reduce(Vocabulary(), AlphabetSeq({2})));

  for (int top = 2; top <= 7; ++top) {
    const auto v = Vocabulary({{"A", top}, {"B", 2}, {"C", 1}});
    const auto r = arity_reduce(v, AlphabetSeq::uniform(v, 2));
    CHECK(static_cast<int>(r.target.size()) == convex_relations(top) + convex_relations(2));
    CHECK(r.target.max_arity() <= top / 2);
  }
}

TEST_CASE("arity reduction element map domain") {
  const auto t = Vocabulary({{"F2", 2}, {"F4", 4}});
  const auto red = arity_reduce(t, AlphabetSeq::uniform(t, 2));
  const Fim m = red.source_fim(3);
  const Fim ms = red.target_fim(3);
  const auto g = red.element_map(m, ms);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto& e = m.element(i);
    bool all_repeated = e.base.size() > 1;
    for (int a : e.base)
      if (std::count(e.base.begin(), e.base.end(), a) < 2) all_repeated = false;
    CHECK((g[i] != npos) == all_repeated);
    if (g[i] != npos) {
      std::vector<int> distinct(e.base.begin(), e.base.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      CHECK(ms.element(g[i]).base == distinct);
      CHECK(red.origin[static_cast<std::size_t>(ms.element(g[i]).symbol)].symbol ==
            static_cast<std::size_t>(e.symbol));
    }
  }
}

TEST_CASE("induced colouring ignores letters off the domain of g") {
  const auto t2 = Vocabulary::canonical(2);
  const auto red = arity_reduce(t2, AlphabetSeq::uniform(t2, 2));
  const Space v = red.source_space(2);
  const Space vs = red.target_space(2);
  const auto g = red.element_map(v.fim(), vs.fim());
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto d = invariant_colouring(v, 2, seed, 3);
    REQUIRE(check_base_invariant(v, d, 2, 1));
    for (std::uint64_t i = 0; i < v.size(); ++i) {
      auto x = v.point(i);
      const auto before = d(x);
      for (std::size_t b = 0; b < x.size(); ++b)
        if (g[b] == npos) x[b] = static_cast<Letter>(splitmix64(seed, i * 31 + b) % 2);
      CHECK(d(x) == before);
    }
  }
  CHECK_FALSE(check_base_invariant(v, seeded_colouring(v, 1, 2), 2, 1));
}

TEST_CASE("arity lift of a constant colouring") {
  const auto t2 = Vocabulary::canonical(2);
  const auto red = arity_reduce(t2, AlphabetSeq::uniform(t2, 2));
  const Space v = red.source_space(2);
  const Space vs = red.target_space(2);
  const auto d = constant_colouring(1);
  const auto r = find_mono_line(vs, red.induced(v, vs, d));
  REQUIRE(r.status == SearchStatus::found);
  const Line l = lift_line_4_4(red, v, vs, r.value->line);
  CHECK(is_line(v, l));
  CHECK(line_monochromatic(v, l, d));
}

TEST_CASE("arity lift soundness on invariant colourings") {
  const auto t2 = Vocabulary::canonical(2);
  const auto red = arity_reduce(t2, AlphabetSeq::uniform(t2, 2));
  int found = 0;
  for (int dim : {2, 3}) {
    const Space v = red.source_space(dim);
    const Space vs = red.target_space(dim);
    const auto types = TypeSet::full(v.alphabets());
    for (std::uint64_t seed = 0; seed < (dim == 2 ? 200u : 40u); ++seed) {
      const auto d = invariant_colouring(v, dim, seed, 2);
      const auto ds = red.induced(v, vs, d);
      const auto r = find_mono_line(vs, ds);
      if (r.status != SearchStatus::found) continue;
      ++found;
      const Line l = lift_line_4_4(red, v, vs, r.value->line);
      REQUIRE(is_line(v, l));
      for (const auto& p : types.types())
        CHECK(d(pt_line(v, l, p)) == ds(pt_line(vs, r.value->line, arity_type(red, p))));
      CHECK(line_monochromatic(v, l, d));
    }
  }
  CHECK(found > 200);
}

TEST_CASE("arity lift can fail without invariance") {
  const auto t2 = Vocabulary::canonical(2);
  const auto red = arity_reduce(t2, AlphabetSeq::uniform(t2, 2));
  const Space v = red.source_space(2);
  const Space vs = red.target_space(2);
  bool flagged = false;
  for (std::uint64_t seed = 0; seed < 200 && !flagged; ++seed) {
    const auto d = seeded_colouring(v, seed, 2);
    const auto r = find_mono_line(vs, red.induced(v, vs, d));
    if (r.status != SearchStatus::found) continue;
    flagged = !line_monochromatic(v, lift_line_4_4(red, v, vs, r.value->line), d);
  }
  CHECK(flagged);
}

TEST_CASE("collapse setup shapes") {
  const auto t2 = Vocabulary::canonical(2);
  const Space v(Fim(t2, 2, TupleMode::multiset), AlphabetSeq::uniform(t2, 2));
  const auto s = collapse_setup(v, 0, 2);
  CHECK(s.k1 == 1);
  CHECK(s.w0 == point_bit(1));
  CHECK(s.w1 == point_bit(2));
  CHECK(s.w2 == 0);
  CHECK(s.n.dim() == 1);
  // K = {1, F2(1,1)}: 4 points, so c* = 2^4
  CHECK(s.vk.size() == 4);
  CHECK(collapse_colour_count(s, 2) == 16);
  CHECK(collapse_colour_count(s, 3) == 81);
  // every element of M lies in exactly one of K and N
  std::vector<int> seen(v.elements(), 0);
  for (auto i : s.k_to_m) ++seen[i];
  for (auto i : s.n_to_m) ++seen[i];
  CHECK(std::all_of(seen.begin(), seen.end(), [](int x) { return x == 1; }));

  CHECK_THROWS(collapse_setup(v, 2, 2));
  CHECK_THROWS(collapse_setup(v, 0, 3));
  const auto c = collapse_colouring(s, constant_colouring(2, 1));
  CHECK(c.colours == 16);
  // all 4 positions coloured 1: 1 + 2 + 4 + 8
  for (std::uint64_t i = 0; i < s.vstar.size(); ++i) CHECK(c(s.vstar.point(i)) == 15);
}

TEST_CASE("collapse h is pt_S and injective") {
  const auto t2 = Vocabulary::canonical(2);
  for (int dim : {2, 3}) {
    const Space v(Fim(t2, dim, TupleMode::multiset), AlphabetSeq::uniform(t2, 2));
    for (int ell = 0; ell < dim; ++ell) {
      for (int k0 = ell + 1; k0 <= dim; ++k0) {
        const auto s = collapse_setup(v, ell, k0);
        const auto lines = enumerate_lines(s.vstar);
        REQUIRE_FALSE(lines.empty());
        for (std::size_t li = 0; li < lines.size(); li += 7) {
          const Line& ls = lines[li];
          const Subspace sub = collapse_subspace(s, ls);
          CHECK(sub.dim() == k0);
          std::set<std::uint64_t> range;
          for (std::uint64_t i = 0; i < s.u.size(); ++i) {
            const auto rho = s.u.point(i);
            const auto x = collapse_h(s, ls, rho);
            REQUIRE(v.contains(x));
            CHECK(x == pt_subspace(v, sub, rho));
            range.insert(v.index(x));
          }
          CHECK(range.size() == s.u.size());
        }
      }
    }
  }
}

TEST_CASE("collapse of a constant colouring") {
  const auto t2 = Vocabulary::canonical(2);
  const Space v(Fim(t2, 2, TupleMode::multiset), AlphabetSeq::uniform(t2, 2));
  const auto out = collapse_step(v, constant_colouring(1), 0, 1, {}, {}, true);
  REQUIRE(out.status == SearchStatus::found);
  CHECK(out.verified);
  CHECK(line_monochromatic(v, *out.lifted, constant_colouring(1)));
}

TEST_CASE("collapse lift soundness") {
  const auto t2 = Vocabulary::canonical(2);
  int found = 0, tried = 0;
  for (int dim : {2, 3}) {
    const Space v(Fim(t2, dim, TupleMode::multiset), AlphabetSeq::uniform(t2, 2));
    for (int ell = 0; ell < dim; ++ell) {
      for (int k0 = ell + 1; k0 <= dim; ++k0) {
        const auto s = collapse_setup(v, ell, k0);
        if (collapse_colour_count(s, 2) == 0 || s.vk.size() > 16) continue;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
          const auto d = invariant_colouring(v, ell, seed, 2);
          ++tried;
          const auto out = collapse_step(v, d, ell, k0);
          if (out.status != SearchStatus::found) continue;
          ++found;
          CHECK(out.verified);
          CHECK(line_monochromatic(v, *out.lifted, d));
          // d° = d∘h
          const auto dc = collapse_dcirc(s, *out.lstar, d);
          for (std::uint64_t i = 0; i < s.u.size(); ++i) {
            const auto rho = s.u.point(i);
            CHECK(dc(rho) == d(collapse_h(s, *out.lstar, rho)));
          }
        }
      }
    }
  }
  CHECK(found > 0);
  CHECK(tried >= 100);
}

TEST_CASE("d° gains one more invariant point") {
  const auto t2 = Vocabulary::canonical(2);
  int checked = 0;
  for (int dim : {2, 3}) {
    const Space v(Fim(t2, dim, TupleMode::multiset), AlphabetSeq::uniform(t2, 2));
    for (int ell = 0; ell + 1 < dim; ++ell) {
      for (int k0 = ell + 1; k0 <= dim; ++k0) {
        const auto s = collapse_setup(v, ell, k0);
        if (collapse_colour_count(s, 2) == 0) continue;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
          const auto d = invariant_colouring(v, ell, seed, 2);
          const auto r = find_mono_line(s.vstar, collapse_colouring(s, d));
          if (r.status != SearchStatus::found) continue;
          CHECK(check_base_invariant(s.u, collapse_dcirc(s, r.value->line, d), ell + 1, 1));
          ++checked;
        }
      }
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("collapse with an H fill") {
  const auto t2 = Vocabulary::canonical(2);
  const CollapseFill fill{1, 1};
  int found = 0;
  for (int dim : {2, 3}) {
    const Space v(Fim(t2, dim, TupleMode::multiset), AlphabetSeq::uniform(t2, 2));
    for (int k0 = 1; k0 <= dim; ++k0) {
      const auto s = collapse_setup(v, 0, k0, fill);
      if (collapse_colour_count(s, 2) == 0) continue;
      // H itself is gone from τ*
      for (const auto& sym : s.tau_star.symbols()) CHECK(sym.name != "F2");
      for (std::size_t b = 0; b < v.elements(); ++b) {
        const auto& e = v.fim().element(b);
        CHECK(static_cast<bool>(s.in_astar[b]) == (e.symbol == 1 && (e.base_mask & ~s.w1) == 0));
        if (s.in_astar[b]) CHECK(s.m_to_n[b] == npos);
      }
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto d = invariant_colouring(v, 0, seed, 2);
        const auto out = collapse_step(v, d, 0, k0, fill);
        if (out.status != SearchStatus::found) continue;
        ++found;
        CHECK(out.verified);
        CHECK(line_monochromatic(v, *out.lifted, d));
        const auto dc = collapse_dcirc(s, *out.lstar, d);
        const PointMask supp = out.lstar->support << (k0 - 1);
        for (std::uint64_t i = 0; i < s.u.size(); ++i) {
          const auto rho = s.u.point(i);
          const auto x = collapse_h(s, *out.lstar, rho);
          CHECK(dc(rho) == d(x));
          for (std::size_t b = 0; b < x.size(); ++b)
            if (s.in_astar[b] && (v.fim().element(b).base_mask & ~supp) != 0) CHECK(x[b] == 1);
        }
      }
    }
  }
  CHECK(found > 0);
}

TEST_CASE("collapse rejects colourings that are not invariant") {
  const auto t2 = Vocabulary::canonical(2);
  const Space v(Fim(t2, 2, TupleMode::multiset), AlphabetSeq::uniform(t2, 2));
  bool thrown = false;
  for (std::uint64_t seed = 0; seed < 20 && !thrown; ++seed) {
    try {
      collapse_step(v, seeded_colouring(v, seed, 2), 1, 2, {}, {}, true);
    } catch (const std::invalid_argument&) {
      thrown = true;
    }
  }
  CHECK(thrown);
}

TEST_CASE("unary fixing") {
  const Vocabulary unary({{"U", 1}});
  const Space vu(Fim(unary, 2), AlphabetSeq({2, 3}));
  const auto fu = fix_unary_step(vu, LambdaType{0, 0});
  CHECK(fu.vstar.size() == vu.size());
  for (std::uint64_t i = 0; i < vu.size(); ++i) CHECK(fu.h(vu.point(i)) == vu.point(i));

  const auto t2 = Vocabulary::canonical(2);
  const Space v(Fim(t2, 2), AlphabetSeq::uniform(t2, 2));
  const auto f = fix_unary_step(v, LambdaType{0, 0});
  CHECK(f.vstar.elements() == 2);
  const auto d = seeded_colouring(v, 9, 3);
  const auto ds = f.induced(d);
  for (std::uint64_t i = 0; i < f.vstar.size(); ++i) {
    const auto nu = f.vstar.point(i);
    const auto x = f.h(nu);
    REQUIRE(v.contains(x));
    CHECK(x[2] == 0);
    CHECK(x[0] == nu[0]);
    CHECK(x[1] == nu[1]);
    CHECK(ds(nu) == d(x));
  }
  const auto dc = f.induced(constant_colouring(1));
  for (std::uint64_t i = 0; i < f.vstar.size(); ++i) CHECK(dc(f.vstar.point(i)) == 0);
  CHECK_THROWS(fix_unary_step(v, LambdaType{0, 2}));
}

TEST_CASE("unary fixing lifts subspaces") {
  const Vocabulary t({{"U", 1}, {"F2", 2}});
  const Space v(Fim(t, 3), AlphabetSeq({2, 2, 2}));
  const auto f = fix_unary_step(v, LambdaType{0, 0, 1});
  const auto d = seeded_colouring(v, 4, 2);
  const auto ds = f.induced(d);
  int mono = 0;
  for_each_subspace(f.vstar, 1, true, [&](const Subspace& sstar) {
    const Subspace s = f.induced_subspace(sstar);
    std::set<std::uint64_t> in_s;
    for_each_subspace_point(v, s, [&](std::span<const Letter> x) {
      in_s.insert(v.index(x));
      return true;
    });
    std::vector<SpacePoint> imgs;
    for_each_subspace_point(f.vstar, sstar, [&](std::span<const Letter> nu) {
      imgs.push_back(f.h(nu));
      return true;
    });
    const auto img = index_set(v, imgs);
    CHECK(std::includes(in_s.begin(), in_s.end(), img.begin(), img.end()));
    // monochromatic under d* means the image is monochromatic under d
    std::set<Colour> cs, cd;
    for_each_subspace_point(f.vstar, sstar, [&](std::span<const Letter> nu) {
      cs.insert(ds(nu));
      cd.insert(d(f.h(nu)));
      return true;
    });
    if (cs.size() == 1) {
      ++mono;
      CHECK(cd.size() == 1);
    }
    return true;
  });
  CHECK(mono > 0);
}
