#include "selftest.hpp"

#include "hjp/bounds.hpp"
#include "hjp/polyramsey.hpp"
#include "hjp/search.hpp"

#include <functional>
#include <ostream>
#include <random>

namespace hjp::cli {

namespace {

// |cl(u)| = p_tau(|u|) on random vocabularies and point sets
bool closure_counting() {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Symbol> syms;
    const int extra = static_cast<int>(rng() % 4);
    for (int i = 0; i < extra; ++i) syms.push_back({"G" + std::to_string(i), 1 + static_cast<int>(rng() % 3)});
    const Vocabulary vocab(syms);
    const int k = 1 + static_cast<int>(rng() % 6);
    const TupleMode mode = rng() % 2 ? TupleMode::set : TupleMode::multiset;
    const Fim m(vocab, k, mode);
    const PointMask u = rng() & ((PointMask{1} << k) - 1);
    if (closure(m, u).size() != p_tau(vocab, static_cast<std::uint64_t>(std::popcount(u)), mode)) return false;
  }
  return true;
}

bool line_census() {
  const Fim m(Vocabulary::canonical(2), 3, TupleMode::set);
  const Space v(m, AlphabetSeq({2, 2}));
  return count_lines(v) == 25 && enumerate_lines(v).size() == 25;
}

bool exact_hj(int jobs) {
  ExactQuery q;
  q.alphabets = AlphabetSeq({2});
  q.jobs = jobs;
  const auto r = exact_partition_number(q);
  return r.kind == ExactResult::Kind::exact && r.value == 2;
}

bool mono_lines_verify(int jobs) {
  const Fim m(Vocabulary::canonical(2), 3, TupleMode::multiset);
  const Space v(m, AlphabetSeq({2, 2}));
  SearchOptions opt;
  opt.jobs = jobs;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto d = seeded_colouring(v, seed, 2);
    const auto r = find_mono_line(v, d, nullptr, opt);
    if (r.status != SearchStatus::found) return false;
    std::optional<Colour> first;
    for (const auto& p : line_points(v, r.value->line)) {
      if (first && *first != d(p)) return false;
      first = d(p);
    }
  }
  return true;
}

bool bound_anchors() {
  const Profile t2 = {{1, 2, 1}, {2, 2, 1}};
  for (int c = 1; c <= 3; ++c) {
    if (hj_bound(2, 1, c).value != BigNat(c)) return false;
    if (f6star_bound(t2, 0, 4, c).value != BigNat(4)) return false;
    if (ram_bound(3, 1, c).value != BigNat(2 * c + 1)) return false;
    const auto lstar = f0_bound(t2, 2, 0, c).value;
    if (!lstar || f0_bound(t2, 1, *lstar, c).value != lstar) return false;
  }
  return f7_empty_bound(5).value == BigNat(5);
}

bool polyramsey_pairs() {
  const PolySpec polys{2, {{{}, {0, 1}}}};
  const std::vector<int> r = {1, 1};
  for (Colour a = 0; a < 2; ++a)
    for (Colour b = 0; b < 2; ++b) {
      const auto res = solve_polyramsey(polys, ring_table_colouring({a, b}, 2, 2), r, 1);
      if (res.status != SearchStatus::found || !res.verified) return false;
    }
  return true;
}

}  // namespace

int run_selftest(std::ostream& out, int jobs) {
  const std::vector<std::pair<const char*, std::function<bool()>>> suites = {
      {"closure-counting", closure_counting},
      {"line-census", line_census},
      {"exact-hj-2-1-2", [jobs] { return exact_hj(jobs); }},
      {"mono-line-verify", [jobs] { return mono_lines_verify(jobs); }},
      {"bound-anchors", bound_anchors},
      {"polyramsey-z2", polyramsey_pairs},
  };
  int failures = 0;
  for (const auto& [name, fn] : suites) {
    bool ok = false;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      out << "error in " << name << ": " << e.what() << "\n";
    }
    out << (ok ? "PASS " : "FAIL ") << name << "\n";
    failures += !ok;
  }
  out << "selftest: " << suites.size() - failures << "/" << suites.size() << " passed\n";
  return failures;
}

}  // namespace hjp::cli
