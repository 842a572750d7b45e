#include "oracles.hpp"

#include <algorithm>
#include <functional>

namespace oracle {

std::vector<Elem> elements(const std::vector<int>& arities, int k, bool multiset) {
  std::set<Elem> out;
  for (int a = 1; a <= k; ++a) out.insert({0, {a}});
  for (std::size_t s = 1; s < arities.size(); ++s) {
    const int r = arities[s];
    std::vector<int> t(r, 1);
    if (k == 0) continue;
    while (true) {
      std::vector<int> sorted = t;
      std::sort(sorted.begin(), sorted.end());
      bool ok = true;
      if (!multiset)
        for (int i = 1; i < r; ++i) ok = ok && sorted[i] != sorted[i - 1];
      if (ok) out.insert({static_cast<int>(s), sorted});
      int i = r - 1;
      while (i >= 0 && t[i] == k) t[i--] = 1;
      if (i < 0) break;
      ++t[i];
    }
  }
  return {out.begin(), out.end()};
}

std::size_t closure_size(const std::vector<int>& arities, int k, bool multiset, const std::set<int>& u) {
  std::size_t n = 0;
  for (const auto& e : elements(arities, k, multiset))
    if (std::all_of(e.base.begin(), e.base.end(), [&](int a) { return u.count(a) > 0; })) ++n;
  return n;
}

std::vector<std::vector<int>> all_points(const std::vector<Elem>& elems, const std::vector<int>& alphabet) {
  std::vector<std::vector<int>> out;
  std::vector<int> p(elems.size(), 0);
  while (true) {
    out.push_back(p);
    int i = static_cast<int>(p.size()) - 1;
    while (i >= 0 && p[i] + 1 >= alphabet[elems[i].symbol]) p[i--] = 0;
    if (i < 0) break;
    ++p[i];
  }
  return out;
}

namespace {

bool realizes_all(const std::vector<Elem>& elems, std::size_t symbols, const std::set<int>& w) {
  std::set<int> seen;
  for (const auto& e : elems)
    if (std::all_of(e.base.begin(), e.base.end(), [&](int a) { return w.count(a) > 0; })) seen.insert(e.symbol);
  return seen.size() == symbols;
}

std::vector<std::vector<int>> all_types(const std::vector<int>& alphabet) {
  std::vector<std::vector<int>> out;
  std::vector<int> p(alphabet.size(), 0);
  while (true) {
    out.push_back(p);
    int i = static_cast<int>(p.size()) - 1;
    while (i >= 0 && p[i] + 1 >= alphabet[i]) p[i--] = 0;
    if (i < 0) break;
    ++p[i];
  }
  return out;
}

}  // namespace

std::uint64_t count_line_sets(const std::vector<int>& arities, const std::vector<int>& alphabet, int k,
                              bool multiset, std::size_t max_size) {
  const auto elems = elements(arities, k, multiset);
  const auto pts = all_points(elems, alphabet);
  const auto types = all_types(alphabet);
  // candidate supports: nonempty point sets realizing every symbol
  std::vector<std::vector<bool>> inside_of;
  for (int mask = 1; mask < (1 << k); ++mask) {
    std::set<int> w;
    for (int a = 1; a <= k; ++a)
      if (mask >> (a - 1) & 1) w.insert(a);
    if (!realizes_all(elems, arities.size(), w)) continue;
    std::vector<bool> in(elems.size());
    for (std::size_t i = 0; i < elems.size(); ++i)
      in[i] = std::all_of(elems[i].base.begin(), elems[i].base.end(), [&](int a) { return w.count(a) > 0; });
    inside_of.push_back(in);
  }
  auto is_line = [&](const std::vector<int>& subset) {
    for (const auto& in : inside_of) {
      bool ok = true;
      for (std::size_t i = 0; i < elems.size() && ok; ++i)
        if (!in[i])
          for (int x : subset) ok = ok && pts[x][i] == pts[subset[0]][i];
      if (!ok) continue;
      auto match = [&](int x, const std::vector<int>& p) {
        for (std::size_t i = 0; i < elems.size(); ++i)
          if (in[i] && pts[x][i] != p[elems[i].symbol]) return false;
        return true;
      };
      for (int x : subset)
        ok = ok && std::any_of(types.begin(), types.end(), [&](const auto& p) { return match(x, p); });
      for (const auto& p : types)
        ok = ok && std::any_of(subset.begin(), subset.end(), [&](int x) { return match(x, p); });
      if (ok) return true;
    }
    return false;
  };
  std::uint64_t count = 0;
  std::vector<int> subset;
  const int n = static_cast<int>(pts.size());
  std::function<void(int)> rec = [&](int from) {
    if (!subset.empty() && is_line(subset)) ++count;
    if (subset.size() == max_size) return;
    for (int x = from; x < n; ++x) {
      subset.push_back(x);
      rec(x + 1);
      subset.pop_back();
    }
  };
  rec(0);
  return count;
}

std::vector<std::vector<int>> classical_lines(int n, int k) {
  // encode words over [n] ∪ {*} (value n stands for *)
  std::vector<std::vector<int>> lines;
  std::vector<int> word(k, 0);
  while (true) {
    if (std::count(word.begin(), word.end(), n) > 0) {
      std::vector<int> line;
      for (int x = 0; x < n; ++x) {
        int idx = 0;
        for (int i = 0; i < k; ++i) idx = idx * n + (word[i] == n ? x : word[i]);
        line.push_back(idx);
      }
      lines.push_back(line);
    }
    int i = k - 1;
    while (i >= 0 && word[i] == n) word[i--] = 0;
    if (i < 0) break;
    ++word[i];
  }
  return lines;
}

bool hj_holds(int n, int k, int c) {
  const auto lines = classical_lines(n, k);
  int size = 1;
  for (int i = 0; i < k; ++i) size *= n;
  std::vector<int> col(size, 0);
  while (true) {
    bool has_mono = false;
    for (const auto& l : lines) {
      bool mono = true;
      for (int x : l) mono = mono && col[x] == col[l[0]];
      if (mono) {
        has_mono = true;
        break;
      }
    }
    if (!has_mono) return false;
    int i = size - 1;
    while (i >= 0 && col[i] == c - 1) col[i--] = 0;
    if (i < 0) return true;
    ++col[i];
  }
}

int pigeonhole(int t, int c) {
  for (int n = 1;; ++n) {
    // every colouring of n points into c colours has a class of size >= t?
    bool all = true;
    std::vector<int> col(n, 0);
    while (true) {
      std::vector<int> cnt(c, 0);
      for (int x : col) ++cnt[x];
      if (*std::max_element(cnt.begin(), cnt.end()) < t) {
        all = false;
        break;
      }
      int i = n - 1;
      while (i >= 0 && col[i] == c - 1) col[i--] = 0;
      if (i < 0) break;
      ++col[i];
    }
    if (all) return n;
  }
}

bool ramsey_pairs_holds(int n, int t, int c) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  std::vector<std::vector<int>> id(n, std::vector<int>(n, -1));
  for (std::size_t e = 0; e < edges.size(); ++e) id[edges[e].first][edges[e].second] = static_cast<int>(e);
  // all t-subsets
  std::vector<std::vector<int>> subsets;
  for (int mask = 0; mask < (1 << n); ++mask)
    if (__builtin_popcount(mask) == t) {
      std::vector<int> s;
      for (int i = 0; i < n; ++i)
        if (mask >> i & 1) s.push_back(i);
      subsets.push_back(s);
    }
  std::vector<int> col(edges.size(), 0);
  while (true) {
    bool mono = false;
    for (const auto& s : subsets) {
      int first = -1;
      bool same = true;
      for (std::size_t a = 0; a < s.size() && same; ++a)
        for (std::size_t b = a + 1; b < s.size(); ++b) {
          int x = col[id[s[a]][s[b]]];
          if (first < 0) first = x;
          if (x != first) {
            same = false;
            break;
          }
        }
      if (same) {
        mono = true;
        break;
      }
    }
    if (!mono) return false;
    int i = static_cast<int>(col.size()) - 1;
    while (i >= 0 && col[i] == c - 1) col[i--] = 0;
    if (i < 0) return true;
    ++col[i];
  }
}

Poly poly_add(const Poly& a, const Poly& b, int q) {
  Poly out = a;
  for (const auto& [e, c] : b) out[e] = (out[e] + c) % q;
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

Poly poly_mul(const Poly& a, const Poly& b, int q) {
  Poly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out[e] = (out[e] + ca * cb) % q;
    }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

Poly compose_sum(const std::vector<int>& p, const std::vector<int>& vars, int nvars, int q) {
  Poly s;
  for (int v : vars) {
    std::vector<int> e(nvars, 0);
    e[v] = 1;
    s = poly_add(s, Poly{{e, 1}}, q);
  }
  Poly power{{std::vector<int>(nvars, 0), 1}};
  Poly out;
  for (std::size_t d = 0; d < p.size(); ++d) {
    if (p[d] % q != 0) {
      Poly term;
      for (const auto& [e, c] : power) term[e] = (c * p[d]) % q;
      out = poly_add(out, term, q);
    }
    power = poly_mul(power, s, q);
  }
  return out;
}

Poly restrict_support(const Poly& p, const std::set<int>& support) {
  Poly out;
  for (const auto& [e, c] : p) {
    std::set<int> s;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] > 0) s.insert(static_cast<int>(i));
    if (s == support) out[e] = c;
  }
  return out;
}

int evaluate(const Poly& p, const std::vector<int>& values, int q) {
  long long total = 0;
  for (const auto& [e, c] : p) {
    long long term = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      for (int j = 0; j < e[i]; ++j) term = term * values[i] % q;
    total = (total + term) % q;
  }
  return static_cast<int>(total);
}

}  // namespace oracle
