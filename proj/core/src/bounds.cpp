#include "hjp/bounds.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

namespace hjp {

Profile profile_of(const Vocabulary& vocab, const AlphabetSeq& alphabets) {
  if (alphabets.symbols() != vocab.size()) throw std::invalid_argument("alphabet sequence does not match vocabulary");
  Profile p;
  for (std::size_t i = 0; i < vocab.size(); ++i) p.push_back({vocab[i].arity, BigNat(alphabets[i]), BigNat(1)});
  return p;
}

Profile normalize(Profile p) {
  for (const auto& e : p) {
    if (e.arity < 1) throw std::invalid_argument("profile arity must be positive");
    if (e.size < 1) throw std::invalid_argument("empty alphabet in profile");
  }
  std::erase_if(p, [](const ProfileEntry& e) { return e.count == 0 || e.size == 1; });
  std::sort(p.begin(), p.end(), [](const ProfileEntry& a, const ProfileEntry& b) {
    return a.arity != b.arity ? a.arity < b.arity : a.size < b.size;
  });
  Profile out;
  for (auto& e : p) {
    if (!out.empty() && out.back().arity == e.arity && out.back().size == e.size)
      out.back().count += e.count;
    else
      out.push_back(std::move(e));
  }
  return out;
}

int profile_arity(const Profile& p) {
  int r = 0;
  for (const auto& e : p)
    if (e.count > 0) r = std::max(r, e.arity);
  return r;
}

std::string describe(const Profile& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(p[i].arity) + ":" + to_short_string(p[i].size, 12);
    if (p[i].count != 1) s += "x" + to_short_string(p[i].count, 12);
  }
  return s + "]";
}

Profile arity_reduced(const Profile& p) {
  Profile out;
  for (const auto& e : p) {
    if (e.arity < 2) continue;
    // compositions of e.arity into parts >= 2
    std::vector<int> parts;
    auto rec = [&](auto& self, int left) -> void {
      if (left == 0) {
        out.push_back({static_cast<int>(parts.size()), e.size, e.count});
        return;
      }
      for (int q = 2; q <= left; ++q) {
        if (left - q == 1) continue;
        parts.push_back(q);
        self(self, left - q);
        parts.pop_back();
      }
    };
    rec(rec, e.arity);
  }
  return normalize(std::move(out));
}

Profile derived_profile(const Profile& p, const BigNat& dim) {
  Profile out;
  for (const auto& e : p)
    for (int s = 0; s < e.arity; ++s)
      out.push_back({e.arity - s, e.size, e.count * multichoose(dim, static_cast<std::uint64_t>(s))});
  return normalize(std::move(out));
}

BigNat fim_size(const Profile& p, const BigNat& dim) {
  BigNat n = 0;
  for (const auto& e : p) n += e.count * multichoose(dim, static_cast<std::uint64_t>(e.arity));
  return n;
}

BigNat fubini(int n) {
  std::vector<BigNat> a(static_cast<std::size_t>(n) + 1);
  a[0] = 1;
  for (int m = 1; m <= n; ++m)
    for (int k = 1; k <= m; ++k) a[m] += binomial(BigNat(m), static_cast<std::uint64_t>(k)) * a[m - k];
  return a[n];
}

std::string render_trace(const TraceNode& node, int max_depth) {
  std::string out;
  auto rec = [&](auto& self, const TraceNode& n, int depth) -> void {
    out.append(2 * static_cast<std::size_t>(depth), ' ');
    out += n.label;
    if (!n.value.empty()) out += " = " + n.value;
    out += '\n';
    if (n.children.empty()) return;
    if (max_depth >= 0 && depth >= max_depth) {
      out.append(2 * static_cast<std::size_t>(depth + 1), ' ');
      out += "... " + std::to_string(n.children.size()) + " sub-steps\n";
      return;
    }
    for (const auto& c : n.children) self(self, *c, depth + 1);
  };
  rec(rec, node, 0);
  return out;
}

std::string hierarchy_class(std::string_view f) {
  if (f == "hj") return "E5";
  if (f == "f7") return "E6";
  if (f == "f6star") return "E7";
  if (f == "f1" || f == "f6") return "E8";
  if (f == "f4") return "E9";
  return "unclassified";
}

namespace {

struct Exceeded {
  std::string reason;
};

std::string hex(const BigNat& x) { return x.str(0, std::ios_base::hex); }

std::string key_of(const Profile& p) {
  std::string s;
  for (const auto& e : p) s += std::to_string(e.arity) + ":" + hex(e.size) + "x" + hex(e.count) + ";";
  return s;
}

std::string sh(const BigNat& x) { return to_short_string(x, 40); }

class Ctx {
 public:
  explicit Ctx(const BoundOptions& o) : opt(o) {}

  const BoundOptions& opt;
  std::shared_ptr<TraceNode> root;
  std::vector<TraceNode*> stack;
  std::map<std::string, BigNat> memo;
  std::uint64_t steps = 0;

  [[noreturn]] void fail(const std::string& why) {
    if (!stack.empty() && stack.back()->value.empty()) stack.back()->value = "exceeded: " + why;
    throw Exceeded{why};
  }

  void tick() {
    if (++steps > opt.max_steps) fail("step budget of " + std::to_string(opt.max_steps) + " exhausted");
  }

  const BigNat& check(const BigNat& x) {
    if (bit_length(x) > opt.max_bits)
      fail("value of " + std::to_string(bit_length(x)) + " bits exceeds " + std::to_string(opt.max_bits));
    return x;
  }

  BigNat pow(const BigNat& b, const BigNat& e) {
    if (e == 0) return 1;
    if (b <= 1) return b;
    std::string why = "power " + sh(b) + "^" + sh(e) + " exceeds " + std::to_string(opt.max_bits) + " bits";
    if (e > opt.max_bits) fail(why);
    auto ee = e.convert_to<std::uint64_t>();
    if ((bit_length(b) - 1) * ee >= opt.max_bits) fail(why);
    return check(boost::multiprecision::pow(b, static_cast<unsigned>(ee)));
  }

  BigNat mul(const BigNat& a, const BigNat& b) { return check(a * b); }

  std::uint64_t small(const BigNat& x, const char* what) {
    if (x > std::numeric_limits<std::uint32_t>::max()) fail(std::string(what) + " too large to iterate");
    return x.convert_to<std::uint64_t>();
  }

  /// |Space| of a dimension-dim fim: Π size^(count·C).
  BigNat space_size(const Profile& p, const BigNat& dim) {
    BigNat v = 1;
    for (const auto& e : p) v = mul(v, pow(e.size, check(e.count * multichoose(dim, static_cast<std::uint64_t>(e.arity)))));
    return v;
  }
};

class Scope {
 public:
  Scope(Ctx& c, std::string label) : c_(c) {
    auto n = std::make_shared<TraceNode>();
    n->label = std::move(label);
    if (c.stack.empty())
      c.root = n;
    else
      c.stack.back()->children.push_back(n);
    c.stack.push_back(n.get());
    c.tick();
  }
  ~Scope() { c_.stack.pop_back(); }
  Scope(const Scope&) = delete;
  Scope& operator=(const Scope&) = delete;

  BigNat done(BigNat v, const char* note = nullptr) {
    c_.check(v);
    c_.stack.back()->value = sh(v);
    if (note) c_.stack.back()->value += std::string(" (") + note + ")";
    return v;
  }

 private:
  Ctx& c_;
};

template <class F>
BigNat memoized(Ctx& c, const std::string& key, std::string label, F&& f) {
  if (auto it = c.memo.find(key); it != c.memo.end()) {
    Scope s(c, std::move(label));
    return s.done(it->second, "memo");
  }
  Scope s(c, std::move(label));
  BigNat v = f();
  c.memo.emplace(key, v);
  return s.done(std::move(v));
}

BigNat ram(Ctx& c, const BigNat& t, const BigNat& ell, const BigNat& col) {
  std::string key = "ram " + hex(t) + " " + hex(ell) + " " + hex(col);
  return memoized(c, key, "ram(t=" + sh(t) + ", ell=" + sh(ell) + ", c=" + sh(col) + ")", [&]() -> BigNat {
    if (ell == 0 || col <= 1 || t <= ell) return t;
    if (ell == 1) return c.check(col * (t - 1) + 1);
    // end-homogeneous sets: N = R(t-1, ell-1) + 1 points, K colour classes per pick
    BigNat n = ram(c, t - 1, ell - 1, col) + 1;
    auto l2 = c.small(ell - 2, "ell");
    BigNat k = c.pow(col, c.check(binomial(n, l2)));
    return c.check(BigNat(l2) + c.pow(k + 1, n - ell + 2));
  });
}

// one block-recursion step: HJ(a+1, 1, c) from N = HJ(a, 1, c)
BigNat block_step(Ctx& c, const BigNat& a, const BigNat& n, const BigNat& col) {
  Scope s(c, "hj(" + sh(a + 1) + ", 1, c=" + sh(col) + ") from " + sh(n) + " blocks");
  BigNat sum = 0;
  BigNat blocks = c.small(n, "block count");
  for (BigNat i = 1; i <= blocks; ++i) {
    c.tick();
    BigNat e = c.pow(a + 1, sum + (n - i));
    sum = c.check(sum + c.pow(col, e));
  }
  return s.done(sum);
}

BigNat hj_line(Ctx& c, const BigNat& n, const BigNat& col) {
  std::string key = "hj1 " + hex(n) + " " + hex(col);
  return memoized(c, key, "hj(n=" + sh(n) + ", m=1, c=" + sh(col) + ")", [&]() -> BigNat {
    if (n <= 1 || col <= 1) return 1;
    BigNat h = 1;
    BigNat top = c.small(n, "alphabet");
    for (BigNat a = 1; a < top; ++a) h = block_step(c, a, h, col);
    return h;
  });
}

BigNat hj(Ctx& c, const BigNat& n, const BigNat& m, const BigNat& col) {
  if (n <= 1 || col <= 1 || m == 0) {
    Scope s(c, "hj(n=" + sh(n) + ", m=" + sh(m) + ", c=" + sh(col) + ")");
    return s.done(m, "trivial");
  }
  if (m == 1) return hj_line(c, n, col);
  std::string key = "hj " + hex(n) + " " + hex(m) + " " + hex(col);
  return memoized(c, key, "hj(n=" + sh(n) + ", m=" + sh(m) + ", c=" + sh(col) + ")", [&]() -> BigNat {
    // a line over Λ^m spread over m convex blocks
    return c.mul(m, hj_line(c, c.pow(n, m), col));
  });
}

BigNat f7(Ctx& c, const Profile& raw, const BigNat& m, const BigNat& col) {
  Profile p = normalize(raw);
  std::string key = "f7 " + key_of(p) + hex(m) + " " + hex(col);
  return memoized(c, key, "f7(" + describe(p) + ", m=" + sh(m) + ", c=" + sh(col) + ")", [&]() -> BigNat {
    BigNat n = 1, rounds = 1;
    for (const auto& e : p) {
      BigNat v = c.pow(e.size, e.count);
      if (e.arity == 1)
        n = c.mul(n, v);
      else
        rounds = c.mul(rounds, v);
    }
    BigNat x = m;
    for (BigNat i = 0; i < rounds; ++i) {
      BigNat y = hj(c, n, x, col);
      if (y == x) break;  // fixed point, the remaining rounds repeat it
      x = std::move(y);
    }
    return x;
  });
}

BigNat f1(Ctx& c, const Profile& raw, const BigNat& col);

BigNat f6star(Ctx& c, const Profile& raw, const BigNat& ell, const BigNat& t, const BigNat& col) {
  Profile p = normalize(raw);
  std::string key = "f6s " + key_of(p) + hex(ell) + " " + hex(t) + " " + hex(col);
  return memoized(c, key, "f6star(" + describe(p) + ", ell=" + sh(ell) + ", t=" + sh(t) + ", c=" + sh(col) + ")",
                  [&]() -> BigNat {
                    BigNat v = t;
                    for (BigNat j = 0; j < ell; ++j) {
                      Scope s(c, "ell=" + sh(j + 1));
                      BigNat k0 = std::max(BigNat(j + 1), v);
                      Profile d = derived_profile(p, k0 - 1);
                      BigNat cstar = c.pow(col, c.space_size(p, k0));
                      v = c.check(k0 + f7(c, d, 1, cstar) - 1);
                      s.done(v);
                    }
                    return v;
                  });
}

BigNat f1(Ctx& c, const Profile& raw, const BigNat& col) {
  Profile p = normalize(raw);
  std::string key = "f1 " + key_of(p) + hex(col);
  return memoized(c, key, "f1(" + describe(p) + ", c=" + sh(col) + ")", [&]() -> BigNat {
    if (col <= 1 || p.empty()) return 1;
    if (profile_arity(p) == 1) {
      BigNat n = 1;
      for (const auto& e : p) n = c.mul(n, c.pow(e.size, e.count));
      return hj(c, n, 1, col);
    }
    BigNat lstar = f1(c, arity_reduced(p), col);
    return f6star(c, p, lstar, lstar, col);
  });
}

BigNat f6(Ctx& c, const Profile& raw, const BigNat& ell, const BigNat& col) {
  Profile p = normalize(raw);
  Scope s(c, "f6(" + describe(p) + ", ell=" + sh(ell) + ", c=" + sh(col) + ")");
  if (profile_arity(p) <= 1) return s.done(f1(c, p, col));
  BigNat lstar = f1(c, arity_reduced(p), col);
  if (ell >= lstar) return s.done(lstar);
  return s.done(f6star(c, p, lstar - ell, lstar, col));
}

// ---------------------------------------------------------------- legacy path

/// One entry per arity, its alphabet the product (so the top arity is monic).
Profile monic(const Profile& p, Ctx& c) {
  Profile out;
  for (const auto& e : p) {
    BigNat v = c.pow(e.size, e.count);
    if (!out.empty() && out.back().arity == e.arity)
      out.back().size = c.mul(out.back().size, v);
    else
      out.push_back({e.arity, v, 1});
  }
  return out;
}

BigNat f1_legacy(Ctx& c, const Profile& raw, const BigNat& col);

// f0(n, ell) given lstar = f0(n+1, 0), walking ell down from lstar
BigNat f0_row(Ctx& c, const Profile& p, const BigNat& n, const BigNat& ell, const BigNat& lstar,
              const BigNat& col) {
  Scope s(c, "f0(n=" + sh(n) + ", ell=" + sh(ell) + ", c=" + sh(col) + ") below " + sh(lstar));
  if (ell >= lstar) return s.done(lstar);
  const ProfileEntry& h = p.back();
  Profile rest(p.begin(), p.end() - 1);
  BigNat v = lstar;
  for (BigNat l = lstar; l > ell;) {
    --l;
    c.tick();
    BigNat k0 = std::max(BigNat(l + 1), v);
    Profile d = derived_profile(rest, k0 - 1);
    for (int sp = 1; sp < h.arity; ++sp)
      d.push_back({h.arity - sp, h.size, multichoose(k0 - 1, static_cast<std::uint64_t>(sp))});
    BigNat cstar = c.pow(col, c.space_size(p, k0 - 1));
    v = c.check(k0 + f1_legacy(c, d, cstar) - 1);
  }
  return s.done(v);
}

BigNat f0(Ctx& c, const Profile& p, const BigNat& n, const BigNat& ell, const BigNat& col) {
  std::string key = "f0 " + key_of(p) + hex(n) + " " + hex(ell) + " " + hex(col);
  return memoized(c, key, "f0(" + describe(p) + ", n=" + sh(n) + ", ell=" + sh(ell) + ", c=" + sh(col) + ")",
                  [&]() -> BigNat {
                    const BigNat& top = p.back().size;
                    Profile rest(p.begin(), p.end() - 1);
                    BigNat v = f1_legacy(c, rest, col);  // n = |Λ_H|: H is constant
                    if (n == top) return v;
                    for (BigNat k = top; k > n + 1;) {
                      --k;
                      v = f0_row(c, p, k, 0, v, col);
                    }
                    return f0_row(c, p, n, ell, v, col);
                  });
}

BigNat f1_legacy(Ctx& c, const Profile& raw, const BigNat& col) {
  Profile p = normalize(raw);
  std::string key = "f1L " + key_of(p) + hex(col);
  return memoized(c, key, "f1_legacy(" + describe(p) + ", c=" + sh(col) + ")", [&]() -> BigNat {
    if (col <= 1 || p.empty()) return 1;
    Profile m = monic(p, c);
    if (profile_arity(m) == 1) return hj(c, m[0].size, 1, col);
    return f0(c, m, 0, 0, col);
  });
}

// ------------------------------------------------------------ multi-step forms

BigNat f1_multi(Ctx& c, const Profile& raw, const BigNat& m, const BigNat& col) {
  Profile p = normalize(raw);
  Scope s(c, "f1_multi(" + describe(p) + ", m=" + sh(m) + ", c=" + sh(col) + ")");
  BigNat k = 0, ci = col;
  for (BigNat i = 0; i < m; ++i) {
    Scope step(c, "step " + sh(i));
    BigNat next = c.pow(col, c.space_size(p, k + m - i));
    k = c.check(k + f1(c, derived_profile(p, k), ci));
    ci = std::move(next);
    step.done(k);
  }
  return s.done(k);
}

BigNat f4(Ctx& c, const Profile& raw, const BigNat& t, const BigNat& ell, const BigNat& col) {
  Profile p = normalize(raw);
  Scope s(c, "f4(" + describe(p) + ", t=" + sh(t) + ", ell=" + sh(ell) + ", c=" + sh(col) + ")");
  BigNat m = ram(c, t, ell, col);
  BigNat k = 0, ci = col;
  for (BigNat i = 0; i < m; ++i) {
    Scope step(c, "step " + sh(i));
    BigNat d = k + m - i;
    BigNat extra = c.check(ell + fim_size(p, d));
    Profile wide = p;
    for (auto& e : wide) e.size += extra;
    BigNat next = c.pow(col, c.space_size(wide, d));
    k = c.check(k + f1(c, derived_profile(wide, d), ci));
    ci = std::move(next);
    step.done(k);
  }
  return s.done(k);
}

template <class F>
BoundValue run(const BoundOptions& opt, F&& f) {
  Ctx c(opt);
  BoundValue out;
  try {
    out.value = f(c);
  } catch (const Exceeded& e) {
    out.reason = e.reason;
  }
  out.trace = c.root;
  return out;
}

int raw_arity(const Profile& p) {
  int r = 0;
  for (const auto& e : p) r = std::max(r, e.arity);
  return r;
}

// A set fim of dimension r·k holds a convex copy of every multiset fim of
// dimension k (blocks of r points), so r times the multiset value works.
void set_scale(BoundValue& v, const Profile& p, const BoundOptions& opt) {
  if (opt.mode == TupleMode::multiset || !v.value) return;
  int r = raw_arity(p);
  if (r <= 1) return;
  v.value = *v.value * r;
  v.trace->value = sh(*v.value) + " (" + std::to_string(r) + "-point blocks)";
}

}  // namespace

BoundValue ram_bound(const BigNat& t, const BigNat& ell, const BigNat& c, const BoundOptions& opt) {
  return run(opt, [&](Ctx& x) { return ram(x, t, ell, c); });
}

BoundValue hj_bound(const BigNat& n, const BigNat& m, const BigNat& c, const BoundOptions& opt) {
  return run(opt, [&](Ctx& x) { return hj(x, n, m, c); });
}

BoundValue f1_bound(const Profile& p, const BigNat& c, const BoundOptions& opt) {
  auto v = run(opt, [&](Ctx& x) { return f1(x, p, c); });
  set_scale(v, p, opt);
  return v;
}

BoundValue f1_bound_legacy(const Profile& p, const BigNat& c, const BoundOptions& opt) {
  auto v = run(opt, [&](Ctx& x) { return f1_legacy(x, p, c); });
  set_scale(v, p, opt);
  return v;
}

BoundValue f0_bound(const Profile& p, const BigNat& n, const BigNat& ell, const BigNat& c,
                    const BoundOptions& opt) {
  Profile q = normalize(p);
  if (q.empty() || profile_arity(q) < 2) throw std::invalid_argument("f0 needs a profile of arity > 1");
  if (q.back().count != 1 || (q.size() > 1 && q[q.size() - 2].arity == q.back().arity))
    throw std::invalid_argument("f0 needs a monic profile");
  if (n > q.back().size) throw std::invalid_argument("f0: n exceeds the top alphabet");
  return run(opt, [&](Ctx& x) { return f0(x, q, n, ell, c); });
}

BoundValue f6star_bound(const Profile& p, const BigNat& ell, const BigNat& t, const BigNat& c,
                        const BoundOptions& opt) {
  return run(opt, [&](Ctx& x) { return f6star(x, p, ell, t, c); });
}

BoundValue f6_bound(const Profile& p, const BigNat& ell, const BigNat& c, const BoundOptions& opt) {
  return run(opt, [&](Ctx& x) { return f6(x, p, ell, c); });
}

BoundValue f7_bound(const Profile& p, const BigNat& m, const BigNat& c, const BoundOptions& opt) {
  return run(opt, [&](Ctx& x) { return f7(x, p, m, c); });
}

BoundValue f7_empty_bound(const BigNat& m) {
  BoundValue v;
  v.value = m;
  v.trace = std::make_shared<TraceNode>(TraceNode{"f7(empty pair set, m=" + sh(m) + ")", sh(m), {}});
  return v;
}

BoundValue f1_multi_bound(const Profile& p, const BigNat& m, const BigNat& c, const BoundOptions& opt) {
  return run(opt, [&](Ctx& x) { return f1_multi(x, p, m, c); });
}

BoundValue f4_bound(const Profile& p, const BigNat& t, const BigNat& ell, const BigNat& c,
                    const BoundOptions& opt) {
  if (t < ell) throw std::invalid_argument("f4 needs t >= ell");
  return run(opt, [&](Ctx& x) { return f4(x, p, t, ell, c); });
}

FimVariantBounds fim_variant_bounds(const Profile& p, const BigNat& c, const BoundOptions& opt) {
  FimVariantBounds out;
  out.f1 = f1_bound(p, c, opt);
  Profile ordered = p;
  for (auto& e : ordered)
    for (int i = 2; i <= e.arity; ++i) e.count *= i;  // r! orderings per symbol
  out.f2 = f1_bound(ordered, c, opt);
  int r = raw_arity(p);
  if (out.f2.value) {
    BigNat t = *out.f2.value;
    out.f3 = run(opt, [&](Ctx& x) { return ram(x, t, BigNat(r), x.pow(c, fubini(r))); });
  } else {
    out.f3 = out.f2;
  }
  return out;
}

}  // namespace hjp
