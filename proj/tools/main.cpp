#include "config.hpp"
#include "selftest.hpp"

#include "hjp/bounds.hpp"
#include "hjp/polyramsey.hpp"
#include "hjp/reductions.hpp"
#include "hjp/search.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace hjp::cli {

namespace {

enum Exit { kOk = 0, kNone = 1, kBudget = 2, kUsage = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

long long to_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw UsageError(what + ": not an integer: '" + s + "'");
  }
}

template <class T>
std::vector<T> int_list(const std::string& text, const std::string& what) {
  std::vector<T> out;
  for (const auto& s : split(text, ',')) out.push_back(static_cast<T>(to_int(s, what)));
  return out;
}

std::string join(const std::vector<int>& v, const char* sep = ",") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
  return s;
}

std::string vocab_line(const Vocabulary& v) {
  std::string s;
  for (const auto& sym : v.symbols()) s += (s.empty() ? "" : " ") + sym.name + ":" + std::to_string(sym.arity);
  return s;
}

std::string alpha_line(const AlphabetSeq& a) { return join({a.sizes().begin(), a.sizes().end()}); }

struct Out {
  std::ostream& os;
  bool tsv = false;
  void row(const std::string& key, const std::string& value) const {
    os << key << (tsv ? "\t" : ": ") << value << "\n";
  }
};

struct Setup {
  Config cfg;
  Vocabulary vocab;
  AlphabetSeq alpha;
  TupleMode mode = TupleMode::set;

  Space space() const { return Space(Fim(vocab, cfg.k, mode), alpha); }
  SearchOptions search_opt() const { return {cfg.budget, cfg.jobs}; }
};

Setup make_setup(const Config& cfg) {
  Setup s{cfg, Vocabulary::parse(cfg.vocab), {}, parse_mode(cfg.mode)};
  auto sizes = int_list<int>(cfg.alpha, "alpha");
  if (sizes.size() == 1) {
    s.alpha = AlphabetSeq::uniform(s.vocab, sizes[0]);
  } else if (sizes.size() == s.vocab.size()) {
    s.alpha = AlphabetSeq(sizes);
  } else {
    throw UsageError("alpha: expected 1 or " + std::to_string(s.vocab.size()) + " sizes, got " +
                     std::to_string(sizes.size()));
  }
  if (cfg.k < 0 || cfg.k > kMaxDim) throw UsageError("k out of range");
  if (cfg.c < 1) throw UsageError("c must be at least 1");
  if (cfg.jobs < 1) throw UsageError("jobs must be at least 1");
  return s;
}

Colouring make_colouring(const std::string& spec, const Space& v, const Config& cfg) {
  if (spec.empty()) return seeded_colouring(v, cfg.seed, cfg.c);
  auto colon = spec.find(':');
  if (colon == std::string::npos) throw UsageError("colouring: expected kind:value, got '" + spec + "'");
  const std::string kind = spec.substr(0, colon), arg = spec.substr(colon + 1);
  if (kind == "seed") return seeded_colouring(v, static_cast<std::uint64_t>(to_int(arg, "seed")), cfg.c);
  if (kind == "const") {
    auto value = static_cast<Colour>(to_int(arg, "const"));
    if (value >= cfg.c) throw UsageError("const colour must be below c");
    return constant_colouring(cfg.c, value);
  }
  if (kind == "table") return table_colouring(v, int_list<Colour>(arg, "table"), cfg.c);
  if (kind == "file") {
    std::istringstream in(read_file(arg));
    return read_colouring(in, v);
  }
  throw UsageError("unknown colouring kind '" + kind + "'");
}

std::string line_text(const Space& v, const Line& l) {
  return "supp=" + describe_support(l.support) + " fixed=" + describe_fixed(v, l.support, l.fixed);
}

// ------------------------------------------------------------------ commands

int cmd_model(const Setup& s, bool list, const Out& out) {
  const Space v = s.space();
  const Fim& m = v.fim();
  out.row("vocabulary", vocab_line(s.vocab));
  out.row("signature", join(s.vocab.signature()));
  out.row("mode", std::string(to_string(s.mode)));
  out.row("dimension", std::to_string(m.dim()));
  out.row("alphabets", alpha_line(s.alpha));
  out.row("elements", std::to_string(m.size()));
  out.row("p_tau", to_decimal(p_tau(s.vocab, static_cast<std::uint64_t>(m.dim()), s.mode)));
  out.row("space", to_decimal(v.size_big()));
  if (list)
    for (std::size_t i = 0; i < m.size(); ++i) out.os << m.describe(i) << "\n";
  return kOk;
}

int cmd_lines(const Setup& s, bool list, const Out& out) {
  const Space v = s.space();
  out.row("lines", to_decimal(count_lines(v)));
  if (list)
    for_each_line(v, [&](const Line& l) {
      out.os << line_text(v, l) << "\n";
      return true;
    });
  return kOk;
}

int cmd_search(const Setup& s, const std::string& colour, int m, bool nonconvex, const Out& out) {
  const Space v = s.space();
  const Colouring d = make_colouring(colour, v, s.cfg);
  if (m <= 1) {
    const auto r = find_mono_line(v, d, nullptr, s.search_opt());
    if (r.status == SearchStatus::found) {
      out.os << "FOUND " << line_text(v, r.value->line) << " colour=" << r.value->colour << "\n";
      return kOk;
    }
    if (r.status == SearchStatus::budget) {
      out.os << "BUDGET partial=" << r.examined << "\n";
      return kBudget;
    }
    out.os << "NONE k=" << s.cfg.k << "\n";
    return kNone;
  }
  const auto r = find_mono_subspace(v, d, m, !nonconvex, s.search_opt());
  if (r.status == SearchStatus::found) {
    const auto& sub = r.value->subspace;
    std::string blocks;
    for (std::size_t l = 0; l < sub.blocks.size(); ++l) {
      blocks += (l ? "|" : "") + describe_support(sub.blocks[l]);
      if (!sub.convex) blocks += "->" + std::to_string(sub.coordinate[l]);
    }
    out.os << "FOUND supp=" << blocks << " fixed=" << describe_fixed(v, sub.support(), sub.fixed)
           << " colour=" << r.value->colour << "\n";
    return kOk;
  }
  if (r.status == SearchStatus::budget) {
    out.os << "BUDGET partial=" << r.examined << "\n";
    return kBudget;
  }
  out.os << "NONE k=" << s.cfg.k << "\n";
  return kNone;
}

int cmd_exact(const Setup& s, int k_max, const Out& out) {
  ExactQuery q;
  q.vocab = s.vocab;
  q.alphabets = s.alpha;
  q.mode = s.mode;
  q.colours = s.cfg.c;
  q.k_max = k_max;
  q.budget = s.cfg.budget;
  q.jobs = s.cfg.jobs;
  const auto r = exact_partition_number(q);
  switch (r.kind) {
    case ExactResult::Kind::exact:
      out.os << r.value << "\n";
      return kOk;
    case ExactResult::Kind::lower_bound:
      out.os << "NONE k=" << k_max << "\n";
      return kNone;
    case ExactResult::Kind::budget:
      break;
  }
  out.os << "BUDGET partial=" << r.value << "\n";
  return kBudget;
}

struct ReduceArgs {
  std::string kind = "arity";
  int ell = 1;
  int k0 = 0;
  std::string fill;
  std::string pstar;
};

int cmd_reduce(const Setup& s, const ReduceArgs& a, const Out& out) {
  const Space v = s.space();
  if (a.kind == "arity") {
    const auto red = arity_reduce(s.vocab, s.alpha);
    out.row("target", vocab_line(red.target));
    out.row("alphabets", alpha_line(red.target_alphabets));
    out.row("dimension", std::to_string(s.cfg.k) + " -> " + std::to_string(s.cfg.k));
    out.row("colours", std::to_string(s.cfg.c));
    return kOk;
  }
  if (a.kind == "collapse") {
    std::optional<CollapseFill> fill;
    if (!a.fill.empty()) {
      auto parts = split(a.fill, ':');
      if (parts.size() != 2) throw UsageError("fill: expected symbol:letter");
      auto sym = s.vocab.index_of(parts[0]);
      if (!sym) throw UsageError("fill: unknown symbol '" + parts[0] + "'");
      fill = CollapseFill{*sym, static_cast<Letter>(to_int(parts[1], "fill letter"))};
    }
    const int k0 = a.k0 ? a.k0 : s.cfg.k - 1;
    const auto st = collapse_setup(v, a.ell, k0, fill);
    out.row("target", vocab_line(st.tau_star));
    out.row("alphabets", alpha_line(st.alphabets_star));
    out.row("dimension", std::to_string(s.cfg.k) + " -> " + std::to_string(st.k1));
    out.row("k0", std::to_string(st.k0));
    out.row("colours", std::to_string(collapse_colour_count(st, s.cfg.c)));
    return kOk;
  }
  if (a.kind == "unary") {
    LambdaType p(s.vocab.size(), 0);
    if (!a.pstar.empty()) {
      auto letters = int_list<int>(a.pstar, "pstar");
      if (letters.size() != p.size()) throw UsageError("pstar: need one letter per symbol");
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<Letter>(letters[i]);
    }
    const auto fx = fix_unary_step(v, p);
    out.row("target", vocab_line(fx.vstar.fim().vocab()));
    out.row("alphabets", alpha_line(fx.vstar.alphabets()));
    out.row("dimension", std::to_string(s.cfg.k) + " -> " + std::to_string(fx.vstar.fim().dim()));
    out.row("colours", std::to_string(s.cfg.c));
    return kOk;
  }
  throw UsageError("reduce: kind must be arity, collapse or unary");
}

struct BoundArgs {
  std::string fn = "f1";
  std::string ell = "0", t = "1", m = "1", n = "2";
  bool trace = false;
  bool cls = false;
  int depth = -1;
  std::size_t max_bits = BoundOptions{}.max_bits;
  std::uint64_t max_steps = BoundOptions{}.max_steps;
};

BigNat big(const std::string& s, const std::string& what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw UsageError(what + ": not a non-negative integer: '" + s + "'");
  return BigNat(s);
}

int report_bound(const std::string& name, const BoundValue& b, const BoundArgs& a, const Out& out) {
  if (b.exact())
    out.os << to_decimal(*b.value) << "\n";
  else
    out.os << "BUDGET exceeded: " << b.reason << "\n";
  if (a.trace && b.trace) out.os << render_trace(*b.trace, a.depth);
  if (a.cls) out.row("class", hierarchy_class(name));
  return b.exact() ? kOk : kBudget;
}

int cmd_bound(const Setup& s, const BoundArgs& a, const Out& out) {
  BoundOptions opt;
  opt.max_bits = a.max_bits;
  opt.max_steps = a.max_steps;
  opt.mode = s.mode;
  const Profile p = profile_of(s.vocab, s.alpha);
  const BigNat c = s.cfg.c;
  const BigNat ell = big(a.ell, "ell"), t = big(a.t, "t"), m = big(a.m, "m"), n = big(a.n, "n");
  if (a.fn == "variants") {
    const auto v = fim_variant_bounds(p, c, opt);
    int code = kOk;
    for (const auto& [name, b] : {std::pair{"f1", &v.f1}, {"f2", &v.f2}, {"f3", &v.f3}}) {
      out.row(name, b->exact() ? to_decimal(*b->value) : "BUDGET exceeded: " + b->reason);
      if (!b->exact()) code = kBudget;
      if (a.trace && b->trace) out.os << render_trace(*b->trace, a.depth);
    }
    return code;
  }
  BoundValue b;
  if (a.fn == "f1") b = f1_bound(p, c, opt);
  else if (a.fn == "f1_legacy") b = f1_bound_legacy(p, c, opt);
  else if (a.fn == "f0") b = f0_bound(p, n, ell, c, opt);
  else if (a.fn == "f6") b = f6_bound(p, ell, c, opt);
  else if (a.fn == "f6star") b = f6star_bound(p, ell, t, c, opt);
  else if (a.fn == "f7") b = f7_bound(p, m, c, opt);
  else if (a.fn == "f1_multi") b = f1_multi_bound(p, m, c, opt);
  else if (a.fn == "f4") b = f4_bound(p, t, ell, c, opt);
  else if (a.fn == "hj") b = hj_bound(n, m, c, opt);
  else if (a.fn == "ram") b = ram_bound(t, ell, c, opt);
  else throw UsageError("bound: unknown function '" + a.fn + "'");
  return report_bound(a.fn, b, a, out);
}

struct PolyArgs {
  int q = 2;
  std::string polys;
  std::string colour;
  std::string r = "1";
  int t = 0;
};

RingColouring make_ring_colouring(const std::string& spec, int q, const Config& cfg) {
  if (spec.empty()) return ring_seeded_colouring(cfg.seed, q, cfg.c);
  auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon), arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "seed") return ring_seeded_colouring(static_cast<std::uint64_t>(to_int(arg, "seed")), q, cfg.c);
  if (kind == "table") return ring_table_colouring(int_list<Colour>(arg, "table"), q, cfg.c);
  throw UsageError("polyramsey colouring must be seed:N or table:LIST");
}

int cmd_polyramsey(const Setup& s, const PolyArgs& a, const Out& out) {
  if (a.polys.empty()) throw UsageError("polyramsey: --polys is required");
  const PolySpec polys = PolySpec::parse(read_file(a.polys), a.q);
  const int t = a.t ? a.t : std::max(1, polys.degree());
  validate(polys, t);
  const auto r = int_list<int>(a.r, "r");
  const RingColouring d = make_ring_colouring(a.colour, a.q, s.cfg);
  const auto res = solve_polyramsey(polys, d, r, t, s.search_opt());

  // dimension guaranteed by the partition bound for this setting
  BoundOptions opt;
  const auto vocab = polyramsey_vocabulary(t, polys.mstar());
  const auto guarantee = f1_bound(profile_of(vocab, AlphabetSeq::uniform(vocab, polys.letters())), s.cfg.c, opt);

  int code = kOk;
  if (res.status == SearchStatus::found) {
    std::vector<int> w(res.w.begin(), res.w.end());
    out.os << "FOUND y=" << join(res.y) << " z=" << res.z << " w=" << join(w) << " colour=" << res.colour
           << " verified=" << (res.verified ? "yes" : "no") << "\n";
  } else if (res.status == SearchStatus::budget) {
    out.os << "BUDGET partial=" << res.examined << "\n";
    code = kBudget;
  } else {
    out.os << "NONE k=" << r.size() << "\n";
    code = kNone;
  }
  out.row("guarantee", guarantee.exact() ? "|r| >= " + to_decimal(*guarantee.value)
                                         : "BUDGET exceeded: " + guarantee.reason);
  return code;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Hales-Jewett partition spaces: search, reductions and bounds"};
  app.require_subcommand(1);
  app.fallthrough();

  Config cfg;
  std::string config_path;
  app.add_option("--config", config_path, "config file (key = value per line)");
  app.add_option("--vocab", cfg.vocab, "vocabulary text: 'name arity' lines, ';' separated, or 'canonical t'");
  app.add_option("--alpha", cfg.alpha, "alphabet size, or one size per symbol (comma list)");
  app.add_option("--mode", cfg.mode, "set, multiset or mixed");
  app.add_option("--k", cfg.k, "dimension");
  app.add_option("--c", cfg.c, "number of colours");
  app.add_option("--seed", cfg.seed, "seed for every random choice");
  app.add_option("--budget", cfg.budget, "search budget, 0 = unlimited");
  app.add_option("--jobs", cfg.jobs, "worker threads");
  app.add_option("--format", cfg.format, "plain or tsv")->check(CLI::IsMember({"plain", "tsv"}));

  bool list = false;
  auto* model = app.add_subcommand("model", "describe the fim and space");
  model->add_flag("--list", list, "list elements");
  auto* lines = app.add_subcommand("lines", "count combinatorial lines");
  lines->add_flag("--list", list, "list lines");

  std::string colour;
  int sub_m = 1;
  bool nonconvex = false;
  auto* search = app.add_subcommand("search", "find a monochromatic line or subspace");
  search->add_option("--colouring", colour, "seed:N, const:V, table:LIST or file:PATH");
  search->add_option("--m", sub_m, "subspace dimension");
  search->add_flag("--nonconvex", nonconvex, "allow non-convex subspaces");

  int k_max = 4;
  auto* exact = app.add_subcommand("exact", "exact partition number by exhaustive search");
  exact->add_option("--k-max", k_max, "largest dimension tried");

  ReduceArgs ra;
  auto* reduce = app.add_subcommand("reduce", "summary of a reduction step");
  reduce->add_option("--kind", ra.kind)->check(CLI::IsMember({"arity", "collapse", "unary"}));
  reduce->add_option("--ell", ra.ell);
  reduce->add_option("--k0", ra.k0);
  reduce->add_option("--fill", ra.fill, "symbol:letter for the filled variant");
  reduce->add_option("--pstar", ra.pstar, "letter per symbol");

  BoundArgs ba;
  auto* bound = app.add_subcommand("bound", "evaluate an upper bound");
  bound->add_option("--fn", ba.fn, "f1 f1_legacy f0 f6 f6star f7 f1_multi f4 hj ram variants");
  bound->add_option("--ell", ba.ell);
  bound->add_option("--t", ba.t);
  bound->add_option("--m", ba.m);
  bound->add_option("--n", ba.n);
  bound->add_flag("--trace", ba.trace, "print the recursion tree");
  bound->add_flag("--class", ba.cls, "print the hierarchy class");
  bound->add_option("--depth", ba.depth, "trace depth, -1 = all");
  bound->add_option("--max-bits", ba.max_bits);
  bound->add_option("--max-steps", ba.max_steps);

  PolyArgs pa;
  auto* poly = app.add_subcommand("polyramsey", "polynomial patterns over Z_q");
  poly->add_option("--q", pa.q)->required();
  poly->add_option("--polys", pa.polys, "file: one polynomial per letter, coefficients ascending")->required();
  poly->add_option("--colour", pa.colour, "seed:N or table:LIST");
  poly->add_option("--r", pa.r, "ring values, comma list");
  poly->add_option("--t", pa.t, "canonical arity (default: max degree)");

  app.add_subcommand("selftest", "run the invariant suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (!config_path.empty()) {
      std::map<std::string, bool> given;
      for (const char* key : {"vocab", "alpha", "mode", "k", "c", "seed", "budget", "jobs", "format"})
        given[key] = app.count(std::string("--") + key) > 0;
      try {
        apply_config(parse_config(read_file(config_path)), cfg, given);
      } catch (const ParseError& e) {
        throw std::runtime_error(config_path + ": " + e.what());
      }
    }
    Out o{std::cout, cfg.format == "tsv"};
    if (app.got_subcommand("selftest")) return run_selftest(std::cout, cfg.jobs) ? kNone : kOk;
    const Setup s = make_setup(cfg);
    if (app.got_subcommand(model)) return cmd_model(s, list, o);
    if (app.got_subcommand(lines)) return cmd_lines(s, list, o);
    if (app.got_subcommand(search)) return cmd_search(s, colour, sub_m, nonconvex, o);
    if (app.got_subcommand(exact)) return cmd_exact(s, k_max, o);
    if (app.got_subcommand(reduce)) return cmd_reduce(s, ra, o);
    if (app.got_subcommand(bound)) return cmd_bound(s, ba, o);
    if (app.got_subcommand(poly)) return cmd_polyramsey(s, pa, o);
  } catch (const std::exception& e) {
    std::cout.flush();
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace hjp::cli

int main(int argc, char** argv) { return hjp::cli::run(argc, argv); }
