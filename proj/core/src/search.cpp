#include "hjp/search.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <thread>

namespace hjp {

std::string_view to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::found: return "found";
    case SearchStatus::none: return "none";
    case SearchStatus::budget: return "budget";
  }
  return "?";
}

namespace {

constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();

int worker_count(int jobs) {
  if (jobs > 0) return jobs;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs body(i) for i in [0, n) on `jobs` threads, handing out indices in order.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body) {
  const int workers = std::min<std::size_t>(static_cast<std::size_t>(worker_count(jobs)), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto run = [&] {
    try {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    } catch (...) {
      std::lock_guard lock(error_mu);
      if (!error) error = std::current_exception();
      next = n;
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t) pool.emplace_back(run);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

void atomic_min(std::atomic<std::uint64_t>& a, std::uint64_t v) {
  std::uint64_t cur = a.load();
  while (v < cur && !a.compare_exchange_weak(cur, v)) {
  }
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > kNone - b ? kNone : a + b;
}

struct SupportPlan {
  PointMask support;
  std::vector<std::size_t> inside;
  std::vector<std::size_t> outside;
  std::uint64_t lines;
  std::uint64_t offset;
};

std::vector<SupportPlan> plan_supports(const Space& v) {
  const Fim& m = v.fim();
  std::vector<SupportPlan> plans;
  if (m.dim() == 0) return plans;
  std::uint64_t offset = 0;
  for (PointMask w = 1; w <= m.all_points(); ++w) {
    if (!admissible_support(m, w)) continue;
    SupportPlan p{w, {}, {}, 1, offset};
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (in_closure(m, i, w)) p.inside.push_back(i);
      else {
        p.outside.push_back(i);
        p.lines *= static_cast<std::uint64_t>(v.radix(i));
      }
    }
    offset = saturating_add(offset, p.lines);
    plans.push_back(std::move(p));
  }
  return plans;
}

// Letters of the j-th fixed part of a support, last outside element fastest.
void decode_fixed(const Space& v, const SupportPlan& p, std::uint64_t j, SpacePoint& fixed) {
  for (std::size_t q = p.outside.size(); q-- > 0;) {
    const std::size_t e = p.outside[q];
    const auto r = static_cast<std::uint64_t>(v.radix(e));
    fixed[e] = static_cast<Letter>(j % r);
    j /= r;
  }
}

void audit_absence(const Space& v, const Colouring& d, const TypeSet& types) {
  const std::uint64_t n = v.size();
  std::vector<Colour> colour = colour_table(v, d);
  std::map<Colour, std::vector<std::uint64_t>> classes;
  for (std::uint64_t i = 0; i < n; ++i) classes[colour[i]].push_back(i);
  std::vector<std::uint64_t> subset;
  for (const auto& [c, members] : classes) {
    const std::uint64_t count = std::uint64_t{1} << members.size();
    for (std::uint64_t bits = 1; bits < count; ++bits) {
      subset.clear();
      for (std::size_t i = 0; i < members.size(); ++i)
        if (bits >> i & 1) subset.push_back(members[i]);
      if (is_line_point_set(v, subset, types))
        throw std::logic_error("search missed a monochromatic line (completeness audit)");
    }
  }
}

}  // namespace

bool is_line_point_set(const Space& v, std::span<const std::uint64_t> points, const TypeSet& types) {
  if (points.empty()) return false;
  const Fim& m = v.fim();
  std::vector<SpacePoint> pts;
  for (std::uint64_t i : points) pts.push_back(v.point(i));
  for (PointMask w = 1; w <= m.all_points() && m.dim() > 0; ++w) {
    if (!admissible_support(m, w)) continue;
    bool ok = true;
    for (std::size_t i = 0; i < m.size() && ok; ++i)
      if (!in_closure(m, i, w))
        for (const auto& p : pts)
          if (p[i] != pts[0][i]) ok = false;
    if (!ok) continue;
    auto matches = [&](const SpacePoint& x, const LambdaType& p) {
      for (std::size_t i = 0; i < m.size(); ++i)
        if (in_closure(m, i, w) && x[i] != p[static_cast<std::size_t>(m.element(i).symbol)]) return false;
      return true;
    };
    for (const auto& x : pts) {
      bool some = false;
      for (const auto& p : types.types()) some = some || matches(x, p);
      if (!some) ok = false;
    }
    for (const auto& p : types.types()) {
      bool some = false;
      for (const auto& x : pts) some = some || matches(x, p);
      if (!some) ok = false;
    }
    if (ok) return true;
  }
  return false;
}

SearchResult<MonoLine> find_mono_line(const Space& v, const Colouring& d, std::shared_ptr<const TypeSet> types,
                                      const SearchOptions& opt) {
  const TypeSet all = types ? *types : TypeSet::full(v.alphabets());
  const auto plans = plan_supports(v);
  const std::uint64_t total = plans.empty() ? 0 : saturating_add(plans.back().offset, plans.back().lines);
  const std::uint64_t limit = opt.budget == 0 ? kNone : opt.budget;
  std::atomic<std::uint64_t> best{kNone};

  parallel_for(plans.size(), opt.jobs, [&](std::size_t s) {
    const SupportPlan& p = plans[s];
    SpacePoint x(v.elements(), 0);
    for (std::uint64_t j = 0; j < p.lines; ++j) {
      const std::uint64_t ordinal = p.offset + j;
      if (ordinal >= limit || ordinal >= best.load()) return;
      if (j == 0) decode_fixed(v, p, 0, x);
      bool mono = true;
      Colour first = 0;
      for (std::size_t t = 0; t < all.size() && mono; ++t) {
        const LambdaType& ty = all[t];
        for (std::size_t i : p.inside) x[i] = ty[static_cast<std::size_t>(v.fim().element(i).symbol)];
        const Colour c = d(x);
        if (t == 0) first = c;
        else if (c != first) mono = false;
      }
      if (mono) {
        atomic_min(best, ordinal);
        return;
      }
      for (std::size_t q = p.outside.size(); q-- > 0;) {
        const std::size_t e = p.outside[q];
        if (x[e] + 1 < v.radix(e)) {
          ++x[e];
          break;
        }
        x[e] = 0;
      }
    }
  });

  SearchResult<MonoLine> out;
  const std::uint64_t hit = best.load();
  if (hit != kNone) {
    auto it = std::upper_bound(plans.begin(), plans.end(), hit,
                               [](std::uint64_t o, const SupportPlan& p) { return o < p.offset; });
    const SupportPlan& p = *(it - 1);
    Line line{p.support, SpacePoint(v.elements(), 0), types};
    decode_fixed(v, p, hit - p.offset, line.fixed);
    const auto pts = line_points(v, line);
    const Colour c = d(pts.front());
    for (const auto& x : pts)
      if (d(x) != c) throw std::logic_error("search returned a line that is not monochromatic");
    out.status = SearchStatus::found;
    out.value = MonoLine{std::move(line), c};
    out.examined = hit + 1;
    return out;
  }
  out.examined = std::min(total, limit);
  if (total > limit) {
    out.status = SearchStatus::budget;
    return out;
  }
  out.status = SearchStatus::none;
  if (v.fim().dim() <= 2 && v.indexable() && v.size() <= 16) audit_absence(v, d, all);
  return out;
}

// ------------------------------------------------------------ exact numbers

namespace {

struct LineTable {
  std::vector<std::uint32_t> flat;                    // points of all lines
  std::vector<std::uint32_t> start;                   // line i is flat[start[i], start[i+1])
  std::vector<std::vector<std::uint32_t>> by_last;    // lines ending at each point
  bool trivial = false;                               // some line is a single point
};

LineTable build_lines(const Space& v, const TypeSet& types) {
  LineTable t;
  const std::uint64_t n = v.size();
  if (n > std::numeric_limits<std::uint32_t>::max()) throw std::overflow_error("space too large for exact search");
  t.by_last.resize(n);
  std::set<std::vector<std::uint32_t>> seen;
  SpacePoint x(v.elements());
  t.start.push_back(0);
  for_each_line(v, [&](const Line& line) {
    std::vector<std::uint32_t> pts;
    for (const auto& p : types.types()) {
      pt_line_into(v, line, p, x);
      pts.push_back(static_cast<std::uint32_t>(v.index(x)));
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() == 1) {
      t.trivial = true;
      return false;
    }
    if (!seen.insert(pts).second) return true;
    const auto id = static_cast<std::uint32_t>(t.start.size() - 1);
    t.by_last[pts.back()].push_back(id);
    t.flat.insert(t.flat.end(), pts.begin(), pts.end());
    t.start.push_back(static_cast<std::uint32_t>(t.flat.size()));
    return true;
  });
  return t;
}

struct Subtree {
  std::vector<Colour> prefix;
  int used = 0;  // colours used by the prefix
};

class Colourer {
 public:
  Colourer(const LineTable& t, std::size_t n, Colour colours, bool symmetry)
      : t_(t), n_(n), colours_(colours), symmetry_(symmetry), col_(n, 0) {}

  // Whether colouring point i with col_[i] completes a monochromatic line.
  bool closes_mono(std::size_t i) const {
    for (std::uint32_t id : t_.by_last[i]) {
      bool mono = true;
      for (std::uint32_t q = t_.start[id]; q < t_.start[id + 1] && mono; ++q)
        mono = col_[t_.flat[q]] == col_[i];
      if (mono) return true;
    }
    return false;
  }

  std::vector<Subtree> prefixes(std::size_t depth) {
    std::vector<Subtree> out;
    expand(0, depth, 0, out);
    return out;
  }

  // Returns found / none / budget for the subtree below a prefix.
  SearchStatus solve(const Subtree& s, std::uint64_t budget, std::uint64_t& nodes) {
    std::copy(s.prefix.begin(), s.prefix.end(), col_.begin());
    budget_ = budget;
    nodes_ = 0;
    exceeded_ = false;
    const bool ok = dfs(s.prefix.size(), s.used);
    nodes = nodes_;
    if (ok) return SearchStatus::found;
    return exceeded_ ? SearchStatus::budget : SearchStatus::none;
  }

  const std::vector<Colour>& colouring() const { return col_; }

 private:
  Colour limit(int used) const {
    return symmetry_ ? std::min<Colour>(colours_, static_cast<Colour>(used) + 1) : colours_;
  }

  void expand(std::size_t i, std::size_t depth, int used, std::vector<Subtree>& out) {
    if (i == depth) {
      out.push_back({std::vector<Colour>(col_.begin(), col_.begin() + static_cast<std::ptrdiff_t>(i)), used});
      return;
    }
    for (Colour c = 0; c < limit(used); ++c) {
      col_[i] = c;
      if (closes_mono(i)) continue;
      expand(i + 1, depth, std::max(used, static_cast<int>(c) + 1), out);
    }
  }

  bool dfs(std::size_t i, int used) {
    if (i == n_) return true;
    for (Colour c = 0; c < limit(used); ++c) {
      if (budget_ != 0 && nodes_ >= budget_) {
        exceeded_ = true;
        return false;
      }
      ++nodes_;
      col_[i] = c;
      if (closes_mono(i)) continue;
      if (dfs(i + 1, std::max(used, static_cast<int>(c) + 1))) return true;
      if (exceeded_) return false;
    }
    return false;
  }

  const LineTable& t_;
  std::size_t n_;
  Colour colours_;
  bool symmetry_;
  std::vector<Colour> col_;
  std::uint64_t budget_ = 0;
  std::uint64_t nodes_ = 0;
  bool exceeded_ = false;
};

// Spaces this small are searched as one subtree.
constexpr std::size_t kSplitDepth = 8;
constexpr std::size_t kSplitMin = 16;

}  // namespace

SearchStatus find_line_free_colouring(const Space& v, Colour colours, const TypeSet* types, bool symmetry,
                                      std::uint64_t budget, int jobs, std::uint64_t* nodes,
                                      std::vector<Colour>* witness) {
  if (colours < 1) throw std::invalid_argument("need at least one colour");
  const TypeSet all = types ? *types : TypeSet::full(v.alphabets());
  const LineTable table = build_lines(v, all);
  if (nodes) *nodes = 0;
  if (table.trivial) return SearchStatus::none;
  const std::size_t n = v.size();
  Colourer root(table, n, colours, symmetry);
  const auto subtrees = root.prefixes(n >= kSplitMin ? kSplitDepth : 0);

  std::vector<SearchStatus> status(subtrees.size(), SearchStatus::none);
  std::vector<std::uint64_t> count(subtrees.size(), 0);
  std::vector<std::vector<Colour>> found(subtrees.size());
  std::atomic<std::uint64_t> first_found{kNone};
  parallel_for(subtrees.size(), jobs, [&](std::size_t i) {
    if (i > first_found.load()) return;
    Colourer c(table, n, colours, symmetry);
    status[i] = c.solve(subtrees[i], budget, count[i]);
    if (status[i] == SearchStatus::found) {
      found[i] = c.colouring();
      atomic_min(first_found, i);
    }
  });

  const std::uint64_t hit = first_found.load();
  const std::size_t last = hit == kNone ? subtrees.size() : static_cast<std::size_t>(hit) + 1;
  std::uint64_t total = 0;
  bool exceeded = false;
  for (std::size_t i = 0; i < last; ++i) {
    total += count[i];
    exceeded = exceeded || status[i] == SearchStatus::budget;
  }
  if (nodes) *nodes = total;
  if (hit != kNone) {
    if (witness) *witness = found[hit];
    return SearchStatus::found;
  }
  return exceeded ? SearchStatus::budget : SearchStatus::none;
}

ExactResult exact_partition_number(const ExactQuery& q) {
  if (q.colours < 1) throw std::invalid_argument("need at least one colour");
  if (q.alphabets.symbols() != q.vocab.size()) throw std::invalid_argument("alphabet sequence does not match vocabulary");
  const int start = q.mode == TupleMode::set ? q.vocab.max_arity() : 1;
  ExactResult out;
  for (int k = start; k <= q.k_max; ++k) {
    const Space v(Fim(q.vocab, k, q.mode), q.alphabets);
    std::uint64_t nodes = 0;
    const SearchStatus s =
        find_line_free_colouring(v, q.colours, q.types.get(), q.symmetry, q.budget, q.jobs, &nodes);
    out.nodes += nodes;
    if (s == SearchStatus::budget) {
      out.kind = ExactResult::Kind::budget;
      out.value = k - 1;
      return out;
    }
    out.trail.emplace_back(k, s == SearchStatus::found);
    if (s == SearchStatus::none) {
      out.kind = ExactResult::Kind::exact;
      out.value = k;
      return out;
    }
  }
  out.kind = ExactResult::Kind::lower_bound;
  out.value = q.k_max + 1;
  return out;
}

// ---------------------------------------------------------------- subspaces

namespace {

struct Frame {
  Fim k;
  Space ks;
  std::vector<std::size_t> f;
  std::vector<std::size_t> outside;
};

Frame make_frame(const Space& v, const Subspace& s) {
  Fim k = subspace_target(v.fim(), s);
  Space ks(k, v.alphabets());
  auto f = collapse_map(v.fim(), k, s);
  std::vector<std::size_t> outside;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] == npos) outside.push_back(i);
  return {std::move(k), std::move(ks), std::move(f), std::move(outside)};
}

// Calls fn(point) for each point of the subspace described by frame + fixed.
bool visit_points(const Frame& fr, const SpacePoint& fixed, const std::function<bool(std::span<const Letter>)>& fn) {
  SpacePoint rho(fr.ks.elements(), 0);
  SpacePoint out(fixed);
  while (true) {
    for (std::size_t i = 0; i < out.size(); ++i)
      if (fr.f[i] != npos) out[i] = rho[fr.f[i]];
    if (!fn(out)) return false;
    std::size_t j = rho.size();
    while (j > 0 && rho[j - 1] + 1 >= fr.ks.radix(j - 1)) rho[--j] = 0;
    if (j == 0) return true;
    ++rho[j - 1];
  }
}

bool order_separated(const std::vector<PointMask>& blocks) {
  for (std::size_t l = 0; l + 1 < blocks.size(); ++l) {
    const int hi = 64 - std::countl_zero(blocks[l]);
    const int lo = std::countr_zero(blocks[l + 1]) + 1;
    if (hi >= lo) return false;
  }
  return true;
}

// Visits (blocks, coordinates) configurations; returns false if stopped.
bool for_each_layout(const Fim& m, int dims, bool convex,
                     const std::function<bool(const std::vector<PointMask>&, const std::vector<int>&)>& fn) {
  std::vector<PointMask> blocks;
  std::function<bool(PointMask)> rec = [&](PointMask used) -> bool {
    if (static_cast<int>(blocks.size()) == dims) {
      std::vector<int> coord(blocks.size());
      for (std::size_t l = 0; l < coord.size(); ++l) coord[l] = static_cast<int>(l + 1);
      if (convex) return fn(blocks, coord);
      do {
        if (!fn(blocks, coord)) return false;
      } while (std::next_permutation(coord.begin(), coord.end()));
      return true;
    }
    for (PointMask w = 1; w <= m.all_points() && m.dim() > 0; ++w) {
      if ((w & used) != 0 || !admissible_support(m, w)) continue;
      if (!blocks.empty()) {
        if (convex) {
          if (std::countr_zero(w) < 64 - std::countl_zero(blocks.back())) continue;
        } else if (std::countr_zero(w) < std::countr_zero(blocks.back())) {
          continue;
        }
      }
      blocks.push_back(w);
      const bool go = rec(used | w);
      blocks.pop_back();
      if (!go) return false;
    }
    return true;
  };
  return rec(0);
}

// Visits every subspace with its frame; fn returns false to stop.
void for_each_framed(const Space& v, int dims, bool convex,
                     const std::function<bool(const Subspace&, const Frame&)>& fn) {
  for_each_layout(v.fim(), dims, convex, [&](const std::vector<PointMask>& blocks, const std::vector<int>& coord) {
    Subspace s;
    s.blocks = blocks;
    s.coordinate = coord;
    s.convex = order_separated(blocks) && std::is_sorted(coord.begin(), coord.end());
    s.fixed.assign(v.elements(), 0);
    const Frame fr = make_frame(v, s);
    while (true) {
      if (!fn(s, fr)) return false;
      std::size_t j = fr.outside.size();
      while (j > 0 && s.fixed[fr.outside[j - 1]] + 1 >= v.radix(fr.outside[j - 1])) s.fixed[fr.outside[--j]] = 0;
      if (j == 0) return true;
      ++s.fixed[fr.outside[j - 1]];
    }
  });
}

std::vector<std::uint64_t> framed_points(const Space& v, const Frame& fr, const Subspace& s) {
  std::vector<std::uint64_t> out;
  visit_points(fr, s.fixed, [&](std::span<const Letter> p) {
    out.push_back(v.index(p));
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

void for_each_subspace(const Space& v, int m, bool convex, const std::function<bool(const Subspace&)>& fn) {
  if (m < 0) throw std::invalid_argument("subspace dimension must be >= 0");
  for_each_framed(v, m, convex, [&](const Subspace& s, const Frame&) { return fn(s); });
}

std::vector<std::uint64_t> subspace_point_set(const Space& v, const Subspace& s) {
  validate_subspace(v, s);
  return framed_points(v, make_frame(v, s), s);
}

SearchResult<MonoSubspace> find_mono_subspace(const Space& v, const Colouring& d, int m, bool convex,
                                              const SearchOptions& opt) {
  if (m < 1) throw std::invalid_argument("subspace dimension must be >= 1");
  SearchResult<MonoSubspace> out;
  for_each_framed(v, m, convex, [&](const Subspace& s, const Frame& fr) {
    if (opt.budget != 0 && out.examined >= opt.budget) {
      out.status = SearchStatus::budget;
      return false;
    }
    ++out.examined;
    bool first = true;
    Colour colour = 0;
    const bool mono = visit_points(fr, s.fixed, [&](std::span<const Letter> p) {
      const Colour c = d(p);
      if (first) {
        colour = c;
        first = false;
        return true;
      }
      return c == colour;
    });
    if (mono) {
      out.status = SearchStatus::found;
      out.value = MonoSubspace{s, colour};
      return false;
    }
    return true;
  });
  if (out.value) {
    Colour c = 0;
    bool first = true;
    for_each_subspace_point(v, out.value->subspace, [&](std::span<const Letter> p) {
      if (first) c = d(p);
      else if (d(p) != c) throw std::logic_error("search returned a subspace that is not monochromatic");
      first = false;
      return true;
    });
  }
  return out;
}

SubspaceColouring seeded_subspace_colouring(std::uint64_t seed, Colour colours) {
  if (colours < 1) throw std::invalid_argument("colourings need at least one colour");
  return [seed, colours](std::span<const std::uint64_t> pts) {
    std::uint64_t h = seed;
    for (std::uint64_t x : pts) h = splitmix64(h, x);
    return splitmix64(h, pts.size()) % colours;
  };
}

SearchResult<MonoSubspaceColouring> find_mono_subspace_colouring(const Space& v, const SubspaceColouring& d_sub,
                                                                 int t, int ell, bool convex,
                                                                 const SearchOptions& opt) {
  if (ell < 0 || ell >= t) throw std::invalid_argument("need 0 <= ell < t");
  const std::uint64_t n = v.size();
  std::map<std::vector<std::uint64_t>, Colour> small;
  for_each_framed(v, ell, convex, [&](const Subspace& s, const Frame& fr) {
    auto pts = framed_points(v, fr, s);
    if (!small.count(pts)) {
      const Colour c = d_sub(pts);
      small.emplace(std::move(pts), c);
    }
    return true;
  });
  SearchResult<MonoSubspaceColouring> out;
  std::set<std::vector<std::uint64_t>> seen;
  std::vector<char> member(n, 0);
  for_each_framed(v, t, convex, [&](const Subspace& s, const Frame& fr) {
    auto pts = framed_points(v, fr, s);
    if (!seen.insert(pts).second) return true;
    if (opt.budget != 0 && out.examined >= opt.budget) {
      out.status = SearchStatus::budget;
      return false;
    }
    ++out.examined;
    for (std::uint64_t x : pts) member[x] = 1;
    std::optional<Colour> colour;
    std::size_t inner = 0;
    bool mono = true;
    for (const auto& [sp, c] : small) {
      if (!std::all_of(sp.begin(), sp.end(), [&](std::uint64_t x) { return member[x] != 0; })) continue;
      ++inner;
      if (!colour) colour = c;
      else if (*colour != c) {
        mono = false;
        break;
      }
    }
    for (std::uint64_t x : pts) member[x] = 0;
    if (mono && colour) {
      out.status = SearchStatus::found;
      out.value = MonoSubspaceColouring{s, *colour, inner};
      return false;
    }
    return true;
  });
  return out;
}

}  // namespace hjp
