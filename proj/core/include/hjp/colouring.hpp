#pragma once

#include "hjp/space.hpp"

#include <iosfwd>

namespace hjp {

using Colour = std::uint64_t;

/// A pure function from space points to colours 0..colours-1.
struct Colouring {
  std::function<Colour(std::span<const Letter>)> fn;
  Colour colours = 1;

  Colour operator()(std::span<const Letter> point) const { return fn(point); }
};

std::uint64_t splitmix64(std::uint64_t seed, std::uint64_t index);

Colouring constant_colouring(Colour colours = 1, Colour value = 0);
/// table[index(point)]; the table length must equal the space size.
Colouring table_colouring(const Space& v, std::vector<Colour> table, Colour colours);
/// splitmix64(seed, index(point)) mod colours.
Colouring seeded_colouring(const Space& v, std::uint64_t seed, Colour colours);
Colouring callback_colouring(std::function<Colour(std::span<const Letter>)> fn, Colour colours);

/// Colour of every point in index order.
std::vector<Colour> colour_table(const Space& v, const Colouring& d);

/// `colouring c=<c> n=<size>` then one colour per line.
void write_colouring(std::ostream& out, const Space& v, const Colouring& d);
/// Throws ParseError with the offending line number.
Colouring read_colouring(std::istream& in, const Space& v);

struct InvarianceResult {
  bool invariant = true;
  std::optional<std::pair<SpacePoint, SpacePoint>> witness;

  explicit operator bool() const { return invariant; }
};

/// (N, α, H)-invariance, N given by its points. For each a in P^N the
/// elements with base {a} and symbol H must carry α in both points.
InvarianceResult check_alpha_invariant(const Space& v, const Colouring& d, PointMask n_points,
                                       Letter alpha, std::size_t h);

/// (ℓ, r)-base-invariance: N is the last ℓ points. ν, η are only required to
/// agree on M_a and on elements where a occurs more than r times.
InvarianceResult check_base_invariant(const Space& v, const Colouring& d, int ell, int r);

}  // namespace hjp
