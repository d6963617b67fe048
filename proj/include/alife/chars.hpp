#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace alife {

// A characteristic value: integer (bits, counts) or string (geometry,
// canonical terms, pivots, encoded tags).
using CharValue = std::variant<std::int64_t, std::string>;

std::string char_value_to_string(const CharValue& v);
bool char_value_eq(const CharValue& a, const CharValue& b);
// Total order used only on dimensions declared char_ordered.
int char_value_cmp(const CharValue& a, const CharValue& b);

enum class DimKind { Int, Str };

struct DimSpec {
  std::string name;
  DimKind kind = DimKind::Int;
  // The character values themselves carry a substantive order (bit 0 < 1,
  // planted trait values). Drives mutation detection and correlation.
  bool char_ordered = false;
  // The difference codomain carries an order; drives the bound conditionals.
  bool diff_ordered = true;

  friend bool operator==(const DimSpec&, const DimSpec&) = default;
};

struct CharSpaceSchema {
  std::vector<DimSpec> dims;

  std::size_t arity() const { return dims.size(); }
  int dim_index(const std::string& name) const;  // -1 if absent

  friend bool operator==(const CharSpaceSchema&, const CharSpaceSchema&) =
      default;
};

// Per-dimension difference values; arity always equals the schema's.
using DiffVector = std::vector<std::int64_t>;

struct MutationBounds {
  DiffVector delta_mut;      // recognition bound
  DiffVector delta_rep_mut;  // reproduction bound

  void require_arity(std::size_t n) const;
};

using CharVector = std::vector<CharValue>;

// Distance measures map snapshot character vectors to a DiffVector of the
// schema's arity. They are not assumed symmetric.
//   xor      — per-dimension binary XOR over int dims
//   eq       — 0 where equal, 1 where different (any value kinds)
//   hamming  — 1-dim schema over whole bitstrings; diff = count of
//              differing bit positions
//   alchemy-tag — dim 0: canonical-term equality; dim 1: 0 iff the target's
//              tag continues the source's tag (same size and lex rank,
//              multiplicity exactly one higher), else 1
struct DistanceMeasure;

const DistanceMeasure& measure_by_id(const std::string& id);

struct DistanceMeasure {
  std::string id;
  DiffVector (*apply)(const CharSpaceSchema&, const CharVector&,
                      const CharVector&);
  // When the bounded-difference relation induced by `bounds` coincides with
  // equality of a per-entity key (every constrained dim is an exact-match
  // dim), returns that key; otherwise nullopt. Lets relation building skip
  // the quadratic scan on big traces.
  std::optional<std::string> (*delta_key)(const CharSpaceSchema&,
                                          const MutationBounds&,
                                          const CharVector&);
};

DiffVector diff(const CharSpaceSchema& schema, const DistanceMeasure& m,
                const CharVector& a, const CharVector& b);

// True iff d[i] <= bound[i] on every diff-ordered dimension (unordered
// dimensions are ignored per the bound definition's conditional).
bool within_bounds(const CharSpaceSchema& schema, const DiffVector& d,
                   const DiffVector& bound);

bool diff_is_zero(const DiffVector& d);

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace alife
