#include "doctest.h"
#include "oracles.hpp"

#include "hjp/colouring.hpp"

#include <random>
#include <set>
#include <sstream>

using namespace hjp;

namespace {

Space make_space(const Vocabulary& v, int k, int n, TupleMode mode = TupleMode::set) {
  return Space(Fim(v, k, mode), AlphabetSeq::uniform(v, n));
}

std::set<SpacePoint> as_set(const std::vector<SpacePoint>& pts) { return {pts.begin(), pts.end()}; }

}  // namespace

TEST_CASE("space sizes") {
  const auto t2 = Vocabulary::canonical(2);
  CHECK(make_space(t2, 3, 2).size() == 64);
  CHECK(make_space(t2, 0, 2).size() == 1);
  CHECK(make_space(t2, 3, 1).size() == 1);
  CHECK(Space(Fim(t2, 2), AlphabetSeq({3, 2})).size() == 3 * 3 * 2);
  CHECK_THROWS(Space(Fim(t2, 2), AlphabetSeq({3})));
  CHECK_THROWS(AlphabetSeq({0}));

  const Space big = make_space(Vocabulary::canonical(3), 8, 200, TupleMode::multiset);
  CHECK_FALSE(big.indexable());
  CHECK_THROWS_AS(big.size(), std::overflow_error);
}

TEST_CASE("point numbering round trips") {
  const Space v(Fim(Vocabulary::canonical(2), 3), AlphabetSeq({3, 2}));
  for (std::uint64_t i = 0; i < v.size(); ++i) {
    const auto p = v.point(i);
    CHECK(v.contains(p));
    CHECK(v.index(p) == i);
  }
  // element 0 is the most significant digit
  CHECK(v.point(1).back() == 1);
  CHECK(v.point(v.size() - 1).front() == 2);
}

TEST_CASE("type sets") {
  const AlphabetSeq a({2, 3});
  const auto full = TypeSet::full(a);
  CHECK(full.size() == 6);
  CHECK(full[0] == LambdaType{0, 0});
  CHECK(full[1] == LambdaType{0, 1});
  CHECK(full[5] == LambdaType{1, 2});
  const auto con = TypeSet::constant(a);
  CHECK(con.size() == 2);
  CHECK(con[1] == LambdaType{1, 1});

  const auto t2 = Vocabulary::canonical(2);
  const auto pairs = type_pairs(t2, a);
  // pairs agree on F2: 3 letters × 2 × 2 choices of id
  CHECK(pairs.size() == 12);
  for (const auto& [p, q] : pairs) CHECK(p[1] == q[1]);
}

TEST_CASE("pt_line") {
  const Space v = make_space(Vocabulary::canonical(2), 3, 2);
  const Fim& m = v.fim();
  Line l{mask_of(std::vector<int>{1, 2}), SpacePoint(m.size(), 0), nullptr};
  l.fixed[2] = 1;                                        // point 3
  l.fixed[m.index_of(1, std::vector<int>{2, 3})] = 1;   // F2(2,3)
  REQUIRE(is_line(v, l));
  const auto x = pt_line(v, l, LambdaType{1, 0});
  CHECK(x[0] == 1);
  CHECK(x[1] == 1);
  CHECK(x[2] == 1);
  CHECK(x[m.index_of(1, std::vector<int>{1, 2})] == 0);
  CHECK(x[m.index_of(1, std::vector<int>{1, 3})] == 0);
  CHECK(x[m.index_of(1, std::vector<int>{2, 3})] == 1);

  auto only = std::make_shared<const TypeSet>(std::vector<LambdaType>{{0, 0}});
  Line restricted = l;
  restricted.types = only;
  CHECK_THROWS(pt_line(v, restricted, LambdaType{1, 0}));
  CHECK_NOTHROW(pt_line(v, restricted, LambdaType{0, 0}));

  const Space single = make_space(Vocabulary::canonical(2), 3, 1);
  Line s{point_bit(1) | point_bit(3), SpacePoint(6, 0), nullptr};
  CHECK(pt_line(single, s, LambdaType{0, 0}) == single.point(0));
}

TEST_CASE("line census against brute force") {
  const auto t2 = Vocabulary::canonical(2);
  const Space v = make_space(t2, 3, 2);
  CHECK(enumerate_lines(v).size() == 25);
  CHECK(count_lines(v) == 25);
  CHECK(oracle::count_line_sets({1, 2}, {2, 2}, 3, false, 4) == 25);

  const Vocabulary unary;
  CHECK(enumerate_lines(make_space(unary, 2, 2)).size() == 5);
  for (int k = 1; k <= 3; ++k) {
    const Space u = make_space(unary, k, 2);
    const auto n = enumerate_lines(u).size();
    CHECK(n == oracle::count_line_sets({1}, {2}, k, false, 2));
    CHECK(n == oracle::classical_lines(2, k).size());
  }
  // multiset mode: every nonempty support qualifies
  const Space mv = make_space(t2, 2, 2, TupleMode::multiset);
  CHECK(enumerate_lines(mv).size() == oracle::count_line_sets({1, 2}, {2, 2}, 2, true, 4));
  CHECK(count_lines(mv) == enumerate_lines(mv).size());

  CHECK(enumerate_lines(make_space(t2, 1, 2)).empty());
}

TEST_CASE("line order is canonical and each line appears once") {
  const Space v(Fim(Vocabulary::canonical(2), 3), AlphabetSeq({2, 3}));
  const auto lines = enumerate_lines(v);
  std::set<std::pair<PointMask, SpacePoint>> seen;
  PointMask last = 0;
  for (const auto& l : lines) {
    CHECK(is_line(v, l));
    CHECK(l.support >= last);
    last = l.support;
    CHECK(seen.insert({l.support, l.fixed}).second);
  }
  CHECK(BigNat(lines.size()) == count_lines(v));
}

TEST_CASE("line points realize one point per type") {
  const AlphabetSeq a({2, 3});
  const Space v(Fim(Vocabulary::canonical(2), 3), a);
  const auto sublist = std::make_shared<const TypeSet>(std::vector<LambdaType>{{0, 0}, {1, 2}});
  for (const auto& l : enumerate_lines(v)) {
    const auto pts = as_set(line_points(v, l));
    CHECK(pts.size() == 6);  // all symbols realized inside supp
    std::vector<std::uint64_t> idx;
    for (const auto& p : pts) idx.push_back(v.index(p));
    Line sub = l;
    sub.types = sublist;
    const auto spts = as_set(line_points(v, sub));
    CHECK(std::includes(pts.begin(), pts.end(), spts.begin(), spts.end()));
  }
}

TEST_CASE("subspaces") {
  const auto t2 = Vocabulary::canonical(2);
  const Space v = make_space(t2, 3, 2);

  SUBCASE("singletons give the whole space") {
    const auto s = make_subspace(v, {point_bit(1), point_bit(2), point_bit(3)}, SpacePoint(6, 0));
    CHECK(s.convex);
    const Fim k = subspace_target(v.fim(), s);
    CHECK(k.size() == v.fim().size());
    std::uint64_t n = 0;
    for_each_subspace_point(v, s, [&](std::span<const Letter> p) {
      CHECK(v.index(p) == n);
      ++n;
      return true;
    });
    CHECK(n == v.size());
    const auto rho = v.point(37);
    CHECK(pt_subspace(v, s, rho) == rho);
  }

  SUBCASE("one block of two points") {
    SpacePoint fixed(6, 0);
    fixed[2] = 1;
    const auto s = make_subspace(v, {point_bit(1) | point_bit(2)}, fixed);
    const Fim k = subspace_target(v.fim(), s);
    CHECK(k.dim() == 1);
    CHECK(k.size() == 2);  // point 1 and F2(1,1)
    std::set<SpacePoint> pts;
    for_each_subspace_point(v, s, [&](std::span<const Letter> p) {
      pts.insert(SpacePoint(p.begin(), p.end()));
      return true;
    });
    CHECK(pts.size() == 4);
    // the same set as the line with this support and fixed part
    Line l{s.blocks[0], fixed, nullptr};
    CHECK(pts == as_set(line_points(v, l)));
  }

  SUBCASE("validation") {
    CHECK_THROWS(make_subspace(v, {point_bit(1), point_bit(1)}, SpacePoint(6, 0)));
    CHECK_THROWS(make_subspace(v, {0}, SpacePoint(6, 0)));
    SpacePoint bad(6, 0);
    bad[0] = 1;
    CHECK_THROWS(make_subspace(v, {point_bit(1)}, bad));
    Subspace nc{{point_bit(1) | point_bit(3), point_bit(2)}, SpacePoint(6, 0), {1, 2}, true};
    CHECK_THROWS(validate_subspace(v, nc));
    nc.convex = false;
    CHECK_NOTHROW(validate_subspace(v, nc));
    const auto mixed = make_subspace(v, {point_bit(1) | point_bit(3), point_bit(2)}, SpacePoint(6, 0));
    CHECK_FALSE(mixed.convex);
  }
}

TEST_CASE("one-dimensional subspaces are lines") {
  for (auto mode : {TupleMode::set, TupleMode::multiset}) {
    const Space v(Fim(Vocabulary::canonical(2), 3, mode), AlphabetSeq({2, 2}));
    for (const auto& l : enumerate_lines(v)) {
      const auto s = make_subspace(v, {l.support}, l.fixed);
      std::set<SpacePoint> pts;
      for_each_subspace_point(v, s, [&](std::span<const Letter> p) {
        pts.insert(SpacePoint(p.begin(), p.end()));
        return true;
      });
      CHECK(pts == as_set(line_points(v, l)));
    }
  }
}

TEST_CASE("splitmix64 reference value") {
  // first output of the standard generator seeded with 0
  CHECK(splitmix64(0, 0) == 0xE220A8397B1DCDAFULL);
  CHECK(splitmix64(0, 1) == 0x6E789E6AA1B965F4ULL);
}

TEST_CASE("colourings") {
  const Space v = make_space(Vocabulary::canonical(2), 2, 2);
  const auto d = seeded_colouring(v, 42, 3);
  const auto again = seeded_colouring(v, 42, 3);
  for (std::uint64_t i = 0; i < v.size(); ++i) {
    const auto p = v.point(i);
    CHECK(d(p) == again(p));
    CHECK(d(p) == splitmix64(42, i) % 3);
  }
  std::stringstream buf;
  write_colouring(buf, v, d);
  const auto text = buf.str();
  CHECK(text.rfind("colouring c=3 n=8\n", 0) == 0);
  const auto back = read_colouring(buf, v);
  CHECK(colour_table(v, back) == colour_table(v, d));

  std::istringstream bad("colouring c=2 n=8\n0\n1\n2\n");
  try {
    read_colouring(bad, v);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
  std::istringstream short_file("colouring c=2 n=8\n0\n1\n");
  CHECK_THROWS_AS(read_colouring(short_file, v), ParseError);
  std::istringstream wrong_n("colouring c=2 n=9\n");
  CHECK_THROWS_AS(read_colouring(wrong_n, v), ParseError);
  CHECK_THROWS(table_colouring(v, {0, 1}, 2));
}

TEST_CASE("alpha invariance") {
  const auto t2 = Vocabulary::canonical(2);
  const Space v = make_space(t2, 2, 2);
  CHECK(check_alpha_invariant(v, constant_colouring(2), v.fim().all_points(), 0, 1));

  const std::size_t pair = v.fim().index_of(1, std::vector<int>{1, 2});
  const auto by_pair = callback_colouring([pair](std::span<const Letter> p) { return Colour{p[pair]}; }, 2);
  const auto r = check_alpha_invariant(v, by_pair, point_bit(2), 0, 1);
  CHECK_FALSE(r.invariant);
  REQUIRE(r.witness);
  CHECK(by_pair(r.witness->first) != by_pair(r.witness->second));
  CHECK(r.witness->first[0] == r.witness->second[0]);

  // depends only on M_a for a = 2
  const auto by_one = callback_colouring([](std::span<const Letter> p) { return Colour{p[0]}; }, 2);
  CHECK(check_alpha_invariant(v, by_one, point_bit(2), 1, 1));

  // multiset: H-elements over {a} are pinned to alpha, so colouring by them is fine
  const Space mv = make_space(t2, 2, 2, TupleMode::multiset);
  const std::size_t f22 = mv.fim().index_of(1, std::vector<int>{2, 2});
  const auto by_f22 = callback_colouring([f22](std::span<const Letter> p) { return Colour{p[f22]}; }, 2);
  CHECK(check_alpha_invariant(mv, by_f22, point_bit(2), 1, 1));
  CHECK_FALSE(check_alpha_invariant(mv, by_f22, point_bit(2), 1, 0));  // symbol id: F2(2,2) free
  CHECK_THROWS(check_alpha_invariant(mv, by_f22, point_bit(2), 2, 1));
}

TEST_CASE("base invariance") {
  const auto t2 = Vocabulary::canonical(2);
  const Space mv = make_space(t2, 1, 2, TupleMode::multiset);
  CHECK(check_base_invariant(mv, constant_colouring(3, 1), 1, 1));
  const auto by_point = callback_colouring([](std::span<const Letter> p) { return Colour{p[0]}; }, 2);
  CHECK(check_base_invariant(mv, by_point, 0, 1));  // vacuous
  CHECK_FALSE(check_base_invariant(mv, by_point, 1, 1));
  // F2(1,1) has the point twice (> r = 1), so ν, η must agree there
  const auto by_pair = callback_colouring([](std::span<const Letter> p) { return Colour{p[1]}; }, 2);
  CHECK(check_base_invariant(mv, by_pair, 1, 1));
  CHECK_FALSE(check_base_invariant(mv, by_pair, 1, 2));
}

TEST_CASE("invariance is monotone in N and in ell") {
  std::mt19937_64 rng(5);
  const auto t2 = Vocabulary::canonical(2);
  const Space v = make_space(t2, 3, 2, TupleMode::multiset);
  const Fim& m = v.fim();
  for (int trial = 0; trial < 20; ++trial) {
    // colour by a random subset of elements
    std::vector<std::size_t> used;
    for (std::size_t i = 0; i < m.size(); ++i)
      if (rng() % 3 == 0) used.push_back(i);
    const auto d = callback_colouring(
        [used](std::span<const Letter> p) {
          Colour c = 0;
          for (std::size_t i : used) c = c * 2 + p[i];
          return c % 3;
        },
        3);
    for (int ell = 0; ell <= 3; ++ell) {
      if (!check_base_invariant(v, d, ell, 1)) continue;
      for (int smaller = 0; smaller < ell; ++smaller) CHECK(check_base_invariant(v, d, smaller, 1));
    }
    for (PointMask n = 0; n <= m.all_points(); ++n) {
      if (!check_alpha_invariant(v, d, n, 0, 1)) continue;
      for (PointMask sub = n; sub; sub = (sub - 1) & n) CHECK(check_alpha_invariant(v, d, sub, 0, 1));
    }
  }
}
