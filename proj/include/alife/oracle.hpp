#pragma once

#include "alife/relations.hpp"

namespace alife {
namespace oracle {

struct BruteAncestry {
  std::vector<Edge> ancestor;
  std::vector<Edge> parent;
};

// Definitional computation: materialize C ∪ R, iterate pairwise composition
// to a fixpoint, intersect with Δ, close again; parent by the covering
// comprehension (minus bare recognition steps, mirroring the fast path).
BruteAncestry brute_ancestor_of(const TraceIndex& idx,
                                const RecognitionMap& rec,
                                const CausalRelation& causal,
                                const DeltaRelation& delta);

}  // namespace oracle
}  // namespace alife
