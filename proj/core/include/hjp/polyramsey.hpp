#pragma once

// Polynomial Ramsey patterns over Z_q through the partition theorem: every
// element of a t-canonical fim gets a table α -> ring value, the ring colouring
// is pulled back to the space, and a monochromatic line gives y, z, w with
// {y + p_α(z)} monochromatic.

#include "hjp/search.hpp"

#include <map>

namespace hjp {

struct RingZq {
  int q = 2;

  explicit RingZq(int modulus);
  int norm(long long x) const;
  int add(int a, int b) const { return (a + b) % q; }
  int mul(int a, int b) const { return static_cast<int>(static_cast<long long>(a) * b % q); }
  int neg(int a) const { return (q - a) % q; }
  int pow(int a, int e) const;
};

/// Coefficients ascending; p[0] is the constant term.
using UniPoly = std::vector<int>;

/// polys[m][α] for m < m*; the single version has m* = 1.
struct PolySpec {
  int q = 2;
  std::vector<std::vector<UniPoly>> polys;

  int letters() const { return polys.empty() ? 0 : static_cast<int>(polys[0].size()); }
  int mstar() const { return static_cast<int>(polys.size()); }
  int degree() const;

  /// One polynomial per line, coefficients ascending; a line `m` starts the
  /// next coordinate. `#` comments and blank lines skipped. Trailing zero
  /// coefficients are dropped. Throws ParseError with the line number.
  static PolySpec parse(std::string_view text, int q);
};

/// Throws std::invalid_argument if a degree exceeds t, a constant term is
/// nonzero, the letter counts differ, or there are no letters.
void validate(const PolySpec& polys, int t);

/// Exponent vector over variables 1..k (index j-1) -> coefficient mod q.
using MultiPoly = std::map<std::vector<int>, int>;

struct Monomial {
  std::vector<int> exponents;
  int coeff = 0;

  PointMask support() const;
};

std::vector<Monomial> monomials(const MultiPoly& p);

/// p(Σ_{j ∈ vars} X_j) expanded symbolically over k variables.
MultiPoly compose_sum(const UniPoly& p, PointMask vars, int k, int q);
/// Monomials whose variable set is exactly `support`.
MultiPoly restrict_support(const MultiPoly& p, PointMask support);
MultiPoly add(const MultiPoly& a, const MultiPoly& b, int q);
int evaluate(const MultiPoly& p, std::span<const int> r, int q);

/// Vocabulary with m* symbols of every arity 1..t; the first unary one is id.
/// Symbol index of (arity s, coordinate m) is (s-1)·m* + m.
Vocabulary polyramsey_vocabulary(int t, int mstar);

struct GTables {
  Fim fim;
  int q = 2;
  int mstar = 1;
  std::vector<int> coordinate;             // per element: the m of its symbol
  std::vector<std::vector<int>> table;     // per element: α -> ring value
};

/// g_b(α): monomials of p_{α,m}(Σ_i r_{b_i}) whose variable set is the base of
/// b, evaluated at r; zero when the base tuple repeats. Points are numbered
/// 1..k in order, so h is the identity. Throws std::invalid_argument unless
/// |r| = dim and the polys are valid for t.
GTables expand_g_tables(const Fim& m, std::span<const int> r, const PolySpec& polys);

/// g(η) in R^{m*}.
std::vector<int> g_value(const GTables& g, std::span<const Letter> eta);

/// y_L: the off-support part of g on the line, per coordinate.
std::vector<int> line_offset(const GTables& g, const Line& line);

/// Whether g(pt_L(α)) = y_L + p_{α,m}(Σ_{j ∈ supp} r_j) for every α and m.
bool check_key_identity(const GTables& g, const Space& v, const Line& line, std::span<const int> r,
                        const PolySpec& polys);

/// A c-colouring of R^{m*}, tuples read as base-q numbers.
struct RingColouring {
  std::function<Colour(std::span<const int>)> fn;
  Colour colours = 1;

  Colour operator()(std::span<const int> x) const { return fn(x); }
};

RingColouring ring_table_colouring(std::vector<Colour> table, int q, Colour colours);
RingColouring ring_seeded_colouring(std::uint64_t seed, int q, Colour colours);
std::uint64_t ring_index(std::span<const int> x, int q);

struct PolyRamseyResult {
  SearchStatus status = SearchStatus::none;
  std::optional<Line> line;
  std::vector<int> y;
  int z = 0;
  std::vector<int> w;  // 1-based indices into r
  Colour colour = 0;
  bool verified = false;  // {y + p_α(z)} re-coloured directly
  std::uint64_t examined = 0;
};

/// Searches the multiset t-canonical fim of dimension |r| under the constant
/// type set. Throws std::invalid_argument on invalid polys.
PolyRamseyResult solve_polyramsey(const PolySpec& polys, const RingColouring& d, std::span<const int> r, int t,
                                  const SearchOptions& opt = {});

/// Re-check of a result without the space: d is constant on
/// {⟨y_m + p_{α,m}(z)⟩ : α}.
bool verify_pattern(const PolySpec& polys, const RingColouring& d, std::span<const int> y, int z);

}  // namespace hjp
