#include "doctest.h"
#include "run_cli.hpp"

#include <filesystem>
#include <fstream>

namespace {

std::string temp_file(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("hjp_cli_" + name);
  std::ofstream(path) << text;
  return path.string();
}

bool has(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("exact partition number of the unary binary space") {
  const auto r = run_cli("exact --vocab 'id 1' --alpha 2 --c 2");
  CHECK(r.code == 0);
  CHECK(r.out == "2\n");
}

TEST_CASE("exact reports a lower bound as none") {
  const auto r = run_cli("exact --alpha 3 --c 2 --k-max 2");
  CHECK(r.code == 1);
  CHECK(r.out == "NONE k=2\n");
}

TEST_CASE("bound with trace") {
  const auto r = run_cli("bound --vocab 'canonical 2' --alpha 2 --c 2 --trace");
  CHECK(r.code == 2);
  CHECK(r.out.rfind("BUDGET exceeded: ", 0) == 0);
  CHECK(has(r.out, "\nf1("));
  CHECK(has(r.out, "\n  f6star("));

  const auto ok = run_cli("bound --fn f1 --alpha 2 --c 2 --trace --class");
  CHECK(ok.code == 0);
  CHECK(ok.out.rfind("2\n", 0) == 0);
  CHECK(has(ok.out, "hj(n=2"));
  CHECK(has(ok.out, "class: E8"));

  CHECK(run_cli("bound --fn ram --t 3 --ell 2 --c 2").out == "81\n");
  CHECK(run_cli("bound --fn hj --n 2 --m 1 --c 5").out == "5\n");
  CHECK(run_cli("bound --fn nope").code == 3);
}

TEST_CASE("model and lines") {
  const auto m = run_cli("model --vocab 'canonical 2' --alpha 2 --k 3");
  CHECK(m.code == 0);
  CHECK(has(m.out, "elements: 6\n"));
  CHECK(has(m.out, "space: 64\n"));
  CHECK(has(m.out, "signature: 1,1\n"));
  CHECK(run_cli("lines --vocab 'canonical 2' --alpha 2 --k 3 --format tsv").out == "lines\t25\n");
  const auto listed = run_cli("lines --k 2 --list");
  CHECK(listed.out.rfind("lines: 5\n", 0) == 0);
  CHECK(std::count(listed.out.begin(), listed.out.end(), '\n') == 6);
}

TEST_CASE("search outcomes and exit codes") {
  const auto found = run_cli("search --vocab 'canonical 2' --k 3 --colouring seed:7");
  CHECK(found.code == 0);
  CHECK(found.out.rfind("FOUND supp={", 0) == 0);
  CHECK(has(found.out, " colour="));

  const auto none = run_cli("search --k 1 --colouring table:0,1");
  CHECK(none.code == 1);
  CHECK(none.out == "NONE k=1\n");

  CHECK(run_cli("search --k 3 --colouring const:1").out == "FOUND supp={1} fixed=2=0,3=0 colour=1\n");
  const auto budget = run_cli("search --k 3 --c 3 --colouring seed:1 --budget 1");
  CHECK((budget.code == 2 || budget.code == 0));
  if (budget.code == 2) CHECK(budget.out.rfind("BUDGET partial=", 0) == 0);

  const auto sub = run_cli("search --k 4 --colouring seed:3 --m 2");
  CHECK(sub.code == 0);
  CHECK(has(sub.out, "|"));

  const auto table = temp_file("colouring.txt", "colouring c=2 n=2\n0\n0\n");
  CHECK(run_cli("search --k 1 --colouring file:" + table).code == 0);
}

TEST_CASE("reduce summaries") {
  const auto a = run_cli("reduce --kind arity --vocab 'canonical 2' --mode multiset --k 2");
  CHECK(a.code == 0);
  CHECK(has(a.out, "target: "));
  const auto c = run_cli("reduce --kind collapse --vocab 'canonical 2' --mode multiset --k 3 --ell 1 --k0 2");
  CHECK(c.code == 0);
  CHECK(has(c.out, "colours: 16\n"));
  const auto u = run_cli("reduce --kind unary --vocab 'canonical 2' --mode multiset --k 2 --pstar 0,1");
  CHECK(u.code == 0);
  CHECK(has(u.out, "target: id:1\n"));
  CHECK(run_cli("reduce --kind sideways").code == 3);
}

TEST_CASE("polyramsey") {
  const auto polys = temp_file("z2.txt", "# Z_2 linear\n0\n0 1\n");
  for (const char* table : {"0,0", "0,1", "1,0", "1,1"}) {
    const auto r = run_cli("polyramsey --q 2 --polys " + polys + " --r 1,1 --colour table:" + std::string(table));
    CHECK(r.code == 0);
    CHECK(has(r.out, "verified=yes"));
    CHECK(has(r.out, "guarantee: "));
  }
  const auto square = temp_file("square.txt", "0\n0 0 1\n");
  CHECK(run_cli("polyramsey --q 5 --polys " + square + " --r 1,2,3 --t 1").code == 3);
  const auto e = run_cli("polyramsey --q 5 --polys " + square + " --r 1,2,3 --t 1", true);
  CHECK(has(e.out, "t >= 2"));
}

TEST_CASE("config files") {
  const auto good = temp_file("good.cfg", "# run\nvocab = canonical 2\nalpha: 2\nk 3\nmode = set\n");
  CHECK(run_cli("lines --config " + good).out == "lines: 25\n");
  // command line wins
  CHECK(run_cli("lines --config " + good + " --k 2").out != "lines: 25\n");

  const auto symbols = temp_file("symbols.cfg", "symbol id 1\nsymbol F2 2\nk = 3\n");
  CHECK(run_cli("lines --config " + symbols).out == "lines: 25\n");

  const auto bad = temp_file("bad.cfg", "vocab = id 1\n\nbogus = 3\n");
  const auto r = run_cli("model --config " + bad, true);
  CHECK(r.code == 3);
  CHECK(has(r.out, "line 3"));
  const auto bad_num = temp_file("badnum.cfg", "k = 2\nc = many\n");
  const auto r2 = run_cli("model --config " + bad_num, true);
  CHECK(r2.code == 3);
  CHECK(has(r2.out, "line 2"));
  const auto dup = temp_file("dup.cfg", "k = 2\nk = 3\n");
  CHECK(has(run_cli("model --config " + dup, true).out, "line 2"));
  const auto bad_vocab = temp_file("badvocab.cfg", "k = 2\nsymbol F 2\nsymbol G x\n");
  CHECK(has(run_cli("model --config " + bad_vocab, true).out, "line 3"));
}

TEST_CASE("usage errors") {
  CHECK(run_cli("").code == 3);
  CHECK(run_cli("frobnicate").code == 3);
  CHECK(run_cli("model --k x").code == 3);
  CHECK(run_cli("model --alpha 2,2,2").code == 3);
  CHECK(run_cli("model --mode sometimes").code == 3);
  CHECK(run_cli("search --colouring rainbow").code == 3);
  CHECK(run_cli("--help").code == 0);
}

TEST_CASE("selftest and determinism") {
  const auto a = run_cli("selftest");
  CHECK(a.code == 0);
  CHECK(has(a.out, "selftest: 6/6 passed"));
  CHECK(run_cli("selftest --jobs 4").out == a.out);
  const std::string cmd = "search --vocab 'canonical 2' --k 3 --colouring seed:11";
  CHECK(run_cli(cmd).out == run_cli(cmd + " --jobs 4").out);
}
