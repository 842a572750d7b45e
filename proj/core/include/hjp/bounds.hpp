#pragma once

// Upper-bound recursions for the partition functions, evaluated exactly with
// big integers under a bit-length and step budget. Every evaluation returns a
// trace of the recursion it took; an over-budget evaluation returns the trace
// up to the node that blew the budget instead of a value.
//
// The recursions use the multiset reading of fims (minimum line support 1).
// For set and mixed fims the public f1 results are multiplied by the max
// arity.

#include "hjp/space.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hjp {

/// A vocabulary with alphabet sizes, up to what the bounds can see: `count`
/// symbols of the given arity share an alphabet of the given size.
struct ProfileEntry {
  int arity = 1;
  BigNat size = 1;
  BigNat count = 1;

  friend bool operator==(const ProfileEntry&, const ProfileEntry&) = default;
};

using Profile = std::vector<ProfileEntry>;

Profile profile_of(const Vocabulary& vocab, const AlphabetSeq& alphabets);
/// Sorted, merged, without empty or one-letter entries.
Profile normalize(Profile p);
int profile_arity(const Profile& p);
std::string describe(const Profile& p);

struct BoundOptions {
  std::size_t max_bits = 1u << 16;  // cap on every intermediate value
  std::uint64_t max_steps = 200000;
  TupleMode mode = TupleMode::multiset;
};

struct TraceNode {
  std::string label;
  std::string value;  // decimal, short form, or "exceeded: ..."
  std::vector<std::shared_ptr<TraceNode>> children;
};

struct BoundValue {
  std::optional<BigNat> value;
  std::shared_ptr<TraceNode> trace;
  std::string reason;  // why the budget was exceeded

  bool exact() const { return value.has_value(); }
};

/// Indented text, two spaces per level; depth < 0 means unlimited.
std::string render_trace(const TraceNode& node, int max_depth = -1);

/// Hierarchy class of a bound function by name ("hj", "f7", "f6star", "f1",
/// "f6", "f4"), or "unclassified".
std::string hierarchy_class(std::string_view function);

BoundValue ram_bound(const BigNat& t, const BigNat& ell, const BigNat& c, const BoundOptions& opt = {});
BoundValue hj_bound(const BigNat& n, const BigNat& m, const BigNat& c, const BoundOptions& opt = {});

BoundValue f1_bound(const Profile& p, const BigNat& c, const BoundOptions& opt = {});
BoundValue f1_bound_legacy(const Profile& p, const BigNat& c, const BoundOptions& opt = {});
/// Needs a monic profile (one symbol of top arity) and n at most its alphabet.
BoundValue f0_bound(const Profile& p, const BigNat& n, const BigNat& ell, const BigNat& c,
                    const BoundOptions& opt = {});
BoundValue f6star_bound(const Profile& p, const BigNat& ell, const BigNat& t, const BigNat& c,
                        const BoundOptions& opt = {});
BoundValue f6_bound(const Profile& p, const BigNat& ell, const BigNat& c, const BoundOptions& opt = {});
/// f7 for the full pair set, by the chain of HJ steps; f7_empty is the
/// empty pair set (= m).
BoundValue f7_bound(const Profile& p, const BigNat& m, const BigNat& c, const BoundOptions& opt = {});
BoundValue f7_empty_bound(const BigNat& m);
BoundValue f1_multi_bound(const Profile& p, const BigNat& m, const BigNat& c, const BoundOptions& opt = {});
BoundValue f4_bound(const Profile& p, const BigNat& t, const BigNat& ell, const BigNat& c,
                    const BoundOptions& opt = {});

struct FimVariantBounds {
  BoundValue f1, f2, f3;
};
FimVariantBounds fim_variant_bounds(const Profile& p, const BigNat& c, const BoundOptions& opt = {});

// profile arithmetic used by the recursions, exposed for tests

/// Symbols G_{F,e} of the arity reduction (unary symbols dropped).
Profile arity_reduced(const Profile& p);
/// τ_{K,A1,A2} for K of dimension dim (only the dimension matters).
Profile derived_profile(const Profile& p, const BigNat& dim);
/// Number of elements of a dimension-dim fim.
BigNat fim_size(const Profile& p, const BigNat& dim);
/// Ordered Bell number: weak orders on n items.
BigNat fubini(int n);

}  // namespace hjp
