#pragma once

// Spaces of letter assignments, types, lines and subspaces.
//
// A space point is a flat array of letters, one per fim element, in the fim's
// element order. Letters of symbol F are 0..|Λ_F|-1.

#include "hjp/model.hpp"

#include <functional>
#include <memory>
#include <utility>

namespace hjp {

using Letter = std::uint8_t;
using SpacePoint = std::vector<Letter>;

inline constexpr int kMaxLetters = 256;

/// |Λ_F| per symbol of a vocabulary.
class AlphabetSeq {
 public:
  AlphabetSeq() = default;
  explicit AlphabetSeq(std::vector<int> sizes);
  static AlphabetSeq uniform(const Vocabulary& vocab, int n);

  std::size_t symbols() const { return sizes_.size(); }
  int operator[](std::size_t symbol) const { return sizes_[symbol]; }
  std::span<const int> sizes() const { return sizes_; }

  friend bool operator==(const AlphabetSeq&, const AlphabetSeq&) = default;

 private:
  std::vector<int> sizes_;
};

/// p(F) per symbol.
using LambdaType = std::vector<Letter>;

class TypeSet {
 public:
  TypeSet() = default;
  explicit TypeSet(std::vector<LambdaType> types);

  /// Every Λ̄-type, in lexicographic order (symbol 0 most significant).
  static TypeSet full(const AlphabetSeq& alphabets);
  /// Types constant in a letter x < min |Λ_F|.
  static TypeSet constant(const AlphabetSeq& alphabets);

  std::size_t size() const { return types_.size(); }
  const LambdaType& operator[](std::size_t i) const { return types_[i]; }
  std::span<const LambdaType> types() const { return types_; }
  bool contains(const LambdaType& p) const;

 private:
  std::vector<LambdaType> types_;
};

/// The pair set ℙ_Λ̄: all (p, q) agreeing on every symbol of arity > 1.
std::vector<std::pair<LambdaType, LambdaType>> type_pairs(const Vocabulary& vocab,
                                                          const AlphabetSeq& alphabets);

BigNat space_size(const Fim& m, const AlphabetSeq& alphabets);

/// Space_Λ̄(M). Points are numbered by mixed radix with element 0 most
/// significant; numbering needs the size to fit in 64 bits.
class Space {
 public:
  Space(Fim m, AlphabetSeq alphabets);

  const Fim& fim() const { return data_->fim; }
  const AlphabetSeq& alphabets() const { return data_->alphabets; }
  /// |Λ| of element i.
  int radix(std::size_t element) const { return data_->radix[element]; }
  std::size_t elements() const { return data_->radix.size(); }

  const BigNat& size_big() const { return data_->size; }
  bool indexable() const { return data_->indexable; }
  /// Throws std::overflow_error unless indexable().
  std::uint64_t size() const;

  std::uint64_t index(std::span<const Letter> point) const;
  SpacePoint point(std::uint64_t index) const;
  void decode(std::uint64_t index, std::span<Letter> out) const;
  bool contains(std::span<const Letter> point) const;
  /// Letters written as `1:0 2:1 F2(1,2):0`.
  std::string describe(std::span<const Letter> point) const;

 private:
  struct Data {
    Fim fim;
    AlphabetSeq alphabets;
    std::vector<int> radix;
    std::vector<std::uint64_t> weight;  // place value of each element
    BigNat size;
    bool indexable = false;
  };
  std::shared_ptr<const Data> data_;
};

// ---------------------------------------------------------------------- lines

/// Support point set, letters off the closure of the support (zero inside it),
/// and type set (null means every Λ̄-type).
struct Line {
  PointMask support = 0;
  SpacePoint fixed;
  std::shared_ptr<const TypeSet> types;

  friend bool operator==(const Line& a, const Line& b) {
    return a.support == b.support && a.fixed == b.fixed;
  }
};

/// Supports qualifying for lines: nonempty and realizing every symbol.
bool admissible_support(const Fim& m, PointMask support);

/// pt_L(p). Throws std::invalid_argument if p is outside the line's types.
SpacePoint pt_line(const Space& v, const Line& line, const LambdaType& p);
/// Writes pt_L(p) into out without the membership check.
void pt_line_into(const Space& v, const Line& line, const LambdaType& p, std::span<Letter> out);

/// One point per type, in type order (duplicates when types agree on supp).
std::vector<SpacePoint> line_points(const Space& v, const Line& line);

/// Verifies the line shape: admissible support, zeroed closure, letters in range.
bool is_line(const Space& v, const Line& line);

/// Visits every line once in canonical order: supports ascending as masks,
/// then fixed parts lexicographically (last element fastest). The callback
/// returns false to stop. Returns the number of lines visited.
std::uint64_t for_each_line(const Space& v, const std::function<bool(const Line&)>& fn,
                            std::shared_ptr<const TypeSet> types = nullptr);
std::vector<Line> enumerate_lines(const Space& v, std::shared_ptr<const TypeSet> types = nullptr);
BigNat count_lines(const Space& v);

std::string describe_support(PointMask support);
/// `i=letter` pairs for the elements off cl(supp), comma separated.
std::string describe_fixed(const Space& v, PointMask support, std::span<const Letter> fixed);

// ------------------------------------------------------------------ subspaces

/// m-dimensional subspace: disjoint blocks W_0..W_{m-1}, letters off
/// cl(∪W), and the coordinate (1-based target point) of each block.
/// With m = 0 the subspace is the single point `fixed`.
struct Subspace {
  std::vector<PointMask> blocks;
  SpacePoint fixed;
  std::vector<int> coordinate;
  bool convex = true;

  int dim() const { return static_cast<int>(blocks.size()); }
  PointMask support() const;
};

/// Subspace with identity coordinates; convex iff blocks are order separated.
Subspace make_subspace(const Space& v, std::vector<PointMask> blocks, SpacePoint fixed);

/// The collapse target K: an m-dimensional fim over the same vocabulary whose
/// point j may repeat up to Σ_{a ∈ W_ℓ} cap(a) times (ℓ the block with coordinate j).
Fim subspace_target(const Fim& m, const Subspace& s);

/// Throws std::invalid_argument describing the first violated condition.
void validate_subspace(const Space& v, const Subspace& s);

/// Maps every element of cl(∪W) to its image element of K; other elements to npos.
std::vector<std::size_t> collapse_map(const Fim& m, const Fim& k, const Subspace& s);

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

/// pt_S(ϱ) for ϱ a point of Space(K).
SpacePoint pt_subspace(const Space& v, const Subspace& s, std::span<const Letter> rho);

/// Visits pt_S(ϱ) for every ϱ in Space(K), ϱ in index order.
void for_each_subspace_point(const Space& v, const Subspace& s,
                             const std::function<bool(std::span<const Letter>)>& fn);

std::string describe_subspace(const Space& v, const Subspace& s);

}  // namespace hjp
