#pragma once

// Constructive reduction steps: arity halving, the collapse step (with an
// optional H/α* variant), and unary fixing. Each comes with the map that lifts
// monochromatic objects back to the original space.

#include "hjp/search.hpp"

namespace hjp {

// ------------------------------------------------------------ arity halving

/// G_{F,e}: e a composition of arity(F) into parts >= 2 (classes are intervals).
struct ArityOrigin {
  std::size_t symbol = 0;
  std::vector<int> parts;
};

struct ArityReduction {
  Vocabulary source;
  AlphabetSeq source_alphabets;
  Vocabulary target;
  AlphabetSeq target_alphabets;
  std::vector<ArityOrigin> origin;  // per target symbol; origin[0] is G_{H,all}
  std::size_t identified = 0;       // H

  /// Target symbol for (F, parts), if any.
  std::optional<std::size_t> target_of(std::size_t symbol, std::span<const int> parts) const;

  /// M is the multiset fim over the source, M* the set fim over the target,
  /// both of dimension dim.
  Fim source_fim(int dim) const;
  Fim target_fim(int dim) const;
  Space source_space(int dim) const;
  Space target_space(int dim) const;

  /// g: element of M -> element of M*, npos off Dom(g).
  std::vector<std::size_t> element_map(const Fim& m, const Fim& mstar) const;

  /// d*(ν) = d(η) with η = ν∘g on Dom(g) and 0 elsewhere.
  Colouring induced(const Space& v, const Space& vstar, const Colouring& d) const;
};

/// Throws std::invalid_argument if arity(τ) = 1.
ArityReduction arity_reduce(const Vocabulary& vocab, const AlphabetSeq& alphabets);

/// The V-line over the support g0⁻¹(supp L*) whose fixed part reads L*'s fixed
/// letters through g (0 off Dom(g)).
Line lift_line_4_4(const ArityReduction& red, const Space& v, const Space& vstar, const Line& lstar);

/// The type q with q(G_{F,e}) = p(F).
LambdaType arity_type(const ArityReduction& red, const LambdaType& p);

// ------------------------------------------------------------- collapse step

/// Optional H/α* variant: elements of A* = {b : base ⊆ w1, F_b = H} are
/// removed from N and filled with α*.
struct CollapseFill {
  std::size_t symbol = 0;
  Letter alpha = 0;
};

struct CollapseSetup {
  Space v;
  int ell = 0;
  int k0 = 0;
  int k1 = 0;
  PointMask w0 = 0, w1 = 0, w2 = 0;
  std::optional<CollapseFill> fill;

  DerivedVocabulary derived;  // τ_{K,w0,w2}, before H is removed
  Vocabulary tau_star;
  AlphabetSeq alphabets_star;
  std::vector<std::size_t> star_piece;  // τ* symbol -> derived piece

  Fim k;  // cl(w0 ∪ w2) as a free fim of dimension k0 - 1
  Space vk;
  std::vector<std::size_t> k_to_m;

  Fim n;  // points are w1 renumbered 1..k1
  Space vstar;
  std::vector<std::size_t> n_to_m;
  std::vector<std::size_t> m_to_n;  // npos for K and A*
  std::vector<char> in_astar;

  Fim kplus;  // dimension k0, point b* = k0 - ℓ takes the whole of w1
  Space u;
  std::vector<std::size_t> g;  // M element -> K⁺ element
};

/// Throws std::invalid_argument on dimension mismatch.
CollapseSetup collapse_setup(const Space& v, int ell, int k0, std::optional<CollapseFill> fill = {});

/// c* = c^{|Space(K)|}; 0 if it does not fit in 64 bits.
Colour collapse_colour_count(const CollapseSetup& s, Colour c);

/// d*(η)(ν) = d(η ∪ ν ∪ α*), packed as a base-c number over Space(K).
/// Throws std::overflow_error if c^{|Space(K)|} does not fit.
Colouring collapse_colouring(const CollapseSetup& s, const Colouring& d);

/// h(ρ) for a line L* of V*.
SpacePoint collapse_h(const CollapseSetup& s, const Line& lstar, std::span<const Letter> rho);

/// The subspace S with h = pt_S.
Subspace collapse_subspace(const CollapseSetup& s, const Line& lstar);

/// d° = d∘h on U.
Colouring collapse_dcirc(const CollapseSetup& s, const Line& lstar, const Colouring& d);

/// L = h(L°) as a V-line.
Line collapse_lift(const CollapseSetup& s, const Line& lstar, const Line& lcirc);

struct CollapseOutcome {
  SearchStatus status = SearchStatus::none;
  std::optional<Line> lstar;
  std::optional<Line> lcirc;
  std::optional<Line> lifted;
  Colour colour = 0;
  bool verified = false;  // every point of the lift re-coloured under d
};

/// Full step: d*-monochromatic L*, then d°-monochromatic L°, then L = h(L°).
/// With check_invariance the (ℓ,1)-base-invariance of d is verified first
/// (std::invalid_argument if it fails).
CollapseOutcome collapse_step(const Space& v, const Colouring& d, int ell, int k0,
                              std::optional<CollapseFill> fill = {}, const SearchOptions& opt = {},
                              bool check_invariance = false);

// ------------------------------------------------------------- unary fixing

struct UnaryFix {
  Space v;
  LambdaType pstar;                   // per symbol of τ; only non-unary entries matter
  std::vector<std::size_t> unary;     // τ* symbol -> τ symbol
  Space vstar;                        // over the unary reduct
  std::vector<std::size_t> mstar_to_m;
  std::vector<std::size_t> m_to_mstar;  // npos on non-unary elements

  SpacePoint h(std::span<const Letter> nu) const;
  Colouring induced(const Colouring& d) const;
  /// S' of V: S*'s blocks, S*'s letters on unary elements and p* letters on
  /// the other elements off cl(∪W).
  Subspace induced_subspace(const Subspace& sstar) const;
};

UnaryFix fix_unary_step(const Space& v, LambdaType pstar);

/// Whether every point of the line has the same d colour.
bool line_monochromatic(const Space& v, const Line& line, const Colouring& d);

}  // namespace hjp
