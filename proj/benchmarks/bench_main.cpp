#include "hjp/bounds.hpp"
#include "hjp/polyramsey.hpp"
#include "hjp/search.hpp"

#include <benchmark/benchmark.h>

using namespace hjp;

namespace {

void BM_Closure(benchmark::State& state) {
  const Fim m(Vocabulary::canonical(3), static_cast<int>(state.range(0)), TupleMode::multiset);
  for (auto _ : state) benchmark::DoNotOptimize(closure(m, m.all_points() >> 1));
}
BENCHMARK(BM_Closure)->Arg(4)->Arg(8)->Arg(12);

void BM_LineEnumeration(benchmark::State& state) {
  const auto t2 = Vocabulary::canonical(2);
  const Space v(Fim(t2, static_cast<int>(state.range(0)), TupleMode::set), AlphabetSeq::uniform(t2, 2));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_lines(v).size());
}
BENCHMARK(BM_LineEnumeration)->Arg(3)->Arg(4);

void BM_MonoLine(benchmark::State& state) {
  const Space v(Fim(Vocabulary(), static_cast<int>(state.range(0)), TupleMode::set), AlphabetSeq({3}));
  const auto d = seeded_colouring(v, 9, 2);
  for (auto _ : state) benchmark::DoNotOptimize(find_mono_line(v, d).status);
}
BENCHMARK(BM_MonoLine)->Arg(4)->Arg(6)->Arg(8);

void BM_ExactUnary(benchmark::State& state) {
  ExactQuery q;
  q.alphabets = AlphabetSeq({2});
  q.colours = static_cast<Colour>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(exact_partition_number(q).value);
}
BENCHMARK(BM_ExactUnary)->Arg(2)->Arg(3);

void BM_HJBound(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(hj_bound(3, 1, 2).value);
}
BENCHMARK(BM_HJBound);

void BM_F1Trace(benchmark::State& state) {
  const Profile p = {{1, 2, 1}, {2, 2, 1}};
  for (auto _ : state) benchmark::DoNotOptimize(f1_bound(p, 2).trace);
}
BENCHMARK(BM_F1Trace);

void BM_PolyRamsey(benchmark::State& state) {
  const PolySpec polys{5, {{{}, {0, 0, 1}}}};
  const std::vector<int> r = {1, 2, 3};
  const auto d = ring_seeded_colouring(2024, 5, 2);
  for (auto _ : state) benchmark::DoNotOptimize(solve_polyramsey(polys, d, r, 2).status);
}
BENCHMARK(BM_PolyRamsey);

}  // namespace

BENCHMARK_MAIN();
