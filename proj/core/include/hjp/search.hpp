#pragma once

// Exhaustive searches for monochromatic lines and subspaces, and exact
// partition numbers at desk scale.

#include "hjp/colouring.hpp"

namespace hjp {

enum class SearchStatus { found, none, budget };

std::string_view to_string(SearchStatus s);

template <class T>
struct SearchResult {
  SearchStatus status = SearchStatus::none;
  std::optional<T> value;
  std::uint64_t examined = 0;  // candidates looked at, deterministic
};

struct SearchOptions {
  std::uint64_t budget = 0;  // max candidates examined; 0 = unlimited
  int jobs = 1;
};

struct MonoLine {
  Line line;
  Colour colour = 0;
};

/// First d-monochromatic line in canonical line order. A returned line is
/// re-checked point by point; on small spaces an absence claim is re-checked
/// against every subset of the space.
SearchResult<MonoLine> find_mono_line(const Space& v, const Colouring& d,
                                      std::shared_ptr<const TypeSet> types = nullptr,
                                      const SearchOptions& opt = {});

/// Whether `points` (space indices) is a line of v for the given types,
/// tested directly against the line axioms over every admissible support.
bool is_line_point_set(const Space& v, std::span<const std::uint64_t> points, const TypeSet& types);

struct ExactQuery {
  Vocabulary vocab;
  AlphabetSeq alphabets;
  TupleMode mode = TupleMode::set;
  Colour colours = 2;
  int k_max = 4;
  std::shared_ptr<const TypeSet> types;  // null = every type
  bool symmetry = true;                  // colour-permutation pruning
  std::uint64_t budget = 0;              // search nodes per subtree; 0 = unlimited
  int jobs = 1;
};

struct ExactResult {
  enum class Kind { exact, lower_bound, budget };
  Kind kind = Kind::exact;
  int value = 0;  // exact k; k_max + 1 for lower_bound; largest decided k for budget
  std::uint64_t nodes = 0;
  /// For each k tried: whether a colouring without monochromatic line exists.
  std::vector<std::pair<int, bool>> trail;
};

/// Smallest k such that every c-colouring of the k-dimensional space has a
/// monochromatic line, searched from the minimum support size upward.
ExactResult exact_partition_number(const ExactQuery& q);

/// Whether some c-colouring of v avoids monochromatic lines; the colouring is
/// written to `witness` when found. Status budget when the node cap is hit.
SearchStatus find_line_free_colouring(const Space& v, Colour colours, const TypeSet* types, bool symmetry,
                                      std::uint64_t budget, int jobs, std::uint64_t* nodes,
                                      std::vector<Colour>* witness = nullptr);

struct MonoSubspace {
  Subspace subspace;
  Colour colour = 0;
};

/// First m-dimensional subspace on which d is constant. Blocks must each
/// realize every symbol. Non-convex search also tries all coordinate orders.
SearchResult<MonoSubspace> find_mono_subspace(const Space& v, const Colouring& d, int m, bool convex,
                                              const SearchOptions& opt = {});

/// Visits the m-dimensional subspaces in canonical order. The callback
/// returns false to stop.
void for_each_subspace(const Space& v, int m, bool convex, const std::function<bool(const Subspace&)>& fn);

/// Sorted point indices of a subspace.
std::vector<std::uint64_t> subspace_point_set(const Space& v, const Subspace& s);

/// Colouring of subspaces, given by their sorted point sets.
using SubspaceColouring = std::function<Colour(std::span<const std::uint64_t>)>;

SubspaceColouring seeded_subspace_colouring(std::uint64_t seed, Colour colours);

struct MonoSubspaceColouring {
  Subspace subspace;
  Colour colour = 0;
  std::size_t inner = 0;  // number of ℓ-subspaces inside
};

/// A t-dimensional subspace all of whose ℓ-subspaces get one colour.
SearchResult<MonoSubspaceColouring> find_mono_subspace_colouring(const Space& v, const SubspaceColouring& d_sub,
                                                                 int t, int ell, bool convex = false,
                                                                 const SearchOptions& opt = {});

}  // namespace hjp
