#pragma once

// Vocabularies and full index models (fims).
//
// A fim is represented freely: its points are 1..k in their natural order and
// every other element is named by (symbol, nondecreasing base tuple). Which
// tuples exist is controlled by per-point multiplicity caps: `set` mode caps
// every point at 1 (strictly increasing tuples), `multiset` mode leaves them
// unbounded (all nondecreasing tuples). Mixed caps arise only as collapse
// targets of subspaces and of the reduction steps.

#include "hjp/bignum.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hjp {

/// Bit (a - 1) set for point a.
using PointMask = std::uint64_t;

inline constexpr int kMaxDim = 63;
inline constexpr int kMaxArity = 8;

PointMask point_bit(int a);
PointMask mask_of(std::span<const int> points);
std::vector<int> points_of(PointMask mask);
int popcount(PointMask mask);

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct Symbol {
  std::string name;
  int arity = 1;

  friend bool operator==(const Symbol&, const Symbol&) = default;
};

/// Ordered set of symmetric function symbols. The unary symbol `id` is always
/// present at index 0.
class Vocabulary {
 public:
  Vocabulary();
  explicit Vocabulary(std::vector<Symbol> symbols);

  /// {id, F2, ..., Ft} with arity(Fs) = s.
  static Vocabulary canonical(int t);

  /// One symbol per line as `name arity`, or a single `canonical t` line.
  /// Blank lines and `#` comments are skipped; `;` also separates lines.
  static Vocabulary parse(std::string_view text);
  std::string to_text() const;

  std::size_t size() const { return symbols_.size(); }
  const Symbol& operator[](std::size_t i) const { return symbols_[i]; }
  std::span<const Symbol> symbols() const { return symbols_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  int max_arity() const;
  /// Entry s-1 counts the symbols of arity s.
  std::vector<int> signature() const;
  /// Exactly one symbol attains the maximal arity.
  bool monic() const;
  /// Index of the first symbol of maximal arity.
  std::size_t max_symbol() const;

  friend bool operator==(const Vocabulary&, const Vocabulary&) = default;

 private:
  std::vector<Symbol> symbols_;
};

enum class TupleMode { set, multiset, mixed };

std::string_view to_string(TupleMode mode);
TupleMode parse_mode(std::string_view text);

struct Element {
  int symbol = 0;
  std::vector<int> base;  // nondecreasing, 1-based points
  PointMask base_mask = 0;

  bool is_point() const { return symbol == 0; }
};

/// Finite index model of a vocabulary over points 1..dim. Immutable and cheap
/// to copy.
class Fim {
 public:
  Fim(Vocabulary vocab, int dim, TupleMode mode = TupleMode::set);

  /// caps[a-1] bounds how often point a may repeat inside one base tuple.
  static Fim with_caps(Vocabulary vocab, std::vector<int> caps);

  const Vocabulary& vocab() const { return data_->vocab; }
  int dim() const { return static_cast<int>(data_->caps.size()); }
  TupleMode mode() const { return data_->mode; }
  const std::vector<int>& caps() const { return data_->caps; }

  std::size_t size() const { return data_->elements.size(); }
  const Element& element(std::size_t i) const { return data_->elements[i]; }
  std::span<const Element> elements() const { return data_->elements; }

  /// Element index of point a (points come first, in order).
  std::size_t point_index(int a) const { return static_cast<std::size_t>(a - 1); }
  PointMask all_points() const;

  /// Element F(tuple); the tuple may be given in any order.
  std::optional<std::size_t> find(std::size_t symbol, std::span<const int> tuple) const;
  std::size_t index_of(std::size_t symbol, std::span<const int> tuple) const;

  /// Whether a sorted tuple respects the multiplicity caps.
  bool admissible(std::span<const int> sorted_tuple) const;

  /// Whether every symbol has an element whose base lies inside w.
  bool realizes_all(PointMask w) const;

  /// Smallest |w| with realizes_all(w) for uniform modes; 0 if none exists.
  int min_support() const;

  std::string describe(std::size_t i) const;

 private:
  struct Data {
    Vocabulary vocab;
    std::vector<int> caps;
    TupleMode mode = TupleMode::set;
    std::vector<Element> elements;
    std::unordered_map<std::uint64_t, std::size_t> index;
  };
  explicit Fim(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  static std::shared_ptr<const Data> build(Vocabulary vocab, std::vector<int> caps, TupleMode mode);

  std::shared_ptr<const Data> data_;
};

/// Element indices of cl_M(A), ascending.
std::vector<std::size_t> closure(const Fim& m, PointMask a);

/// Whether element i lies in cl_M(A).
inline bool in_closure(const Fim& m, std::size_t i, PointMask a) {
  return (m.element(i).base_mask & ~a) == 0;
}

/// Size of the closure of any x-point set.
BigNat p_tau(const Vocabulary& vocab, std::uint64_t x, TupleMode mode);

class HomError : public std::runtime_error {
 public:
  HomError(std::size_t element, const std::string& what)
      : std::runtime_error(what), element_(element) {}
  std::size_t element() const { return element_; }

 private:
  std::size_t element_;
};

/// Unique extension of a point map (f[a-1] is the image of point a) to all
/// elements, mapping F(a...) to F(f(a)...). With `order_preserving` the point
/// map must be strictly increasing (Hom); otherwise any map is allowed (Hm).
/// Throws HomError naming the first element whose image tuple N lacks.
std::vector<std::size_t> extend_hom(std::span<const int> f, const Fim& m, const Fim& n,
                                    bool order_preserving);

/// Symbol F_{left,right} of a derived vocabulary. Left parameters come from
/// the first k0 points, right ones from the last k1 points of M_{k0+k1}.
struct Piece {
  std::size_t symbol = 0;
  std::vector<int> left;
  std::vector<int> right;
  int arity = 1;
};

struct DerivedVocabulary {
  Vocabulary base;
  int k0 = 0;
  int k1 = 0;
  std::vector<Piece> pieces;  // pieces[0] is id itself

  Vocabulary vocabulary() const;
  std::size_t proj(std::size_t piece) const { return pieces[piece].symbol; }
  std::vector<int> signature() const { return vocabulary().signature(); }
};

/// tau^[k0,k1]: one piece per symbol F and parameter tuples with
/// lg(left) + lg(right) < arity(F). Parameter tuples are nondecreasing in
/// multiset mode and strictly increasing in set mode.
DerivedVocabulary derive_vocabulary(const Vocabulary& vocab, int k0, int k1,
                                    TupleMode mode = TupleMode::multiset);

}  // namespace hjp
