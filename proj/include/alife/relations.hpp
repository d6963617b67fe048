#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "alife/config.hpp"
#include "alife/trace.hpp"
#include "alife/verdict.hpp"

namespace alife {

// Dense numbering of entity instances (state-major, so id order is state
// order). All relation algebra runs on dense ids.
struct TraceIndex {
  explicit TraceIndex(const Trace& t);

  const Trace* trace = nullptr;
  std::vector<const EntitySnapshot*> snaps;
  std::vector<std::uint32_t> state_pos;                      // dense -> pos
  std::vector<std::pair<std::uint32_t, std::uint32_t>> ranges;  // pos -> [b,e)
  std::unordered_map<std::string, std::uint32_t> by_ref;

  std::size_t size() const { return snaps.size(); }
  const EntitySnapshot& snap(std::uint32_t id) const { return *snaps[id]; }
  std::uint32_t state_index(std::uint32_t id) const {
    return snaps[id]->ref.state_index;
  }
  std::optional<std::uint32_t> find(const EntityRef& r) const;
  std::uint32_t require(const EntityRef& r) const;
};

using Edge = std::pair<std::uint32_t, std::uint32_t>;

inline std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

struct EdgeSet {
  std::vector<Edge> edges;  // kept sorted+unique by finalize()
  std::unordered_set<std::uint64_t> lookup;

  bool contains(std::uint32_t a, std::uint32_t b) const {
    return lookup.count(edge_key(a, b)) > 0;
  }
  bool add(std::uint32_t a, std::uint32_t b) {
    if (!lookup.insert(edge_key(a, b)).second) return false;
    edges.emplace_back(a, b);
    return true;
  }
  void finalize();
  std::size_t size() const { return edges.size(); }
};

// Partial map over one trace: source instance -> recognized instance in the
// next state. Functional by construction; injectivity is a checked axiom.
struct RecognitionMap {
  std::unordered_map<std::uint32_t, std::uint32_t> next;
  std::unordered_set<std::uint32_t> targets;

  void add(std::uint32_t src, std::uint32_t dst) {
    next[src] = dst;
    targets.insert(dst);
  }
  std::optional<std::uint32_t> at(std::uint32_t src) const {
    auto it = next.find(src);
    if (it == next.end()) return std::nullopt;
    return it->second;
  }
  bool is_target(std::uint32_t id) const { return targets.count(id) > 0; }
  bool is_edge(std::uint32_t a, std::uint32_t b) const {
    auto it = next.find(a);
    return it != next.end() && it->second == b;
  }
};

// Builds the model recognizer's candidate map. Recognizers:
//   tag            — equal tag strings across consecutive states
//   langton-pivot  — alias of tag matching (pivot tuple is the tag)
//   alchemy-tag    — (size,lex,mul) -> (size,lex,mul+1)
RecognitionMap build_recognition(const TraceIndex& idx,
                                 const ObserverConfig& cfg);

struct RecognitionVerdicts {
  Verdict step_forward;  // every edge advances exactly one state
  Verdict injective;     // no two sources share a target
  Verdict bounded;       // diffs within delta_mut on diff-ordered dims
};

RecognitionVerdicts validate_recognition(const TraceIndex& idx,
                                         const RecognitionMap& rec,
                                         const ObserverConfig& cfg);

struct DroppedEvent {
  CausalEvent event;
  std::string reason;
};

struct CausalRelation {
  EdgeSet retained;
  std::vector<DroppedEvent> dropped;
};

// Filters the model-recorded events: an event whose child is anyone's
// recognition target is dropped (a recognized entity is a continuation, not
// an offspring), as are events with dangling refs or a span != 1.
CausalRelation build_causal(const TraceIndex& idx, const RecognitionMap& rec);

// The bounded-difference relation. Implicit form answers membership from
// characters; explicit form is a materialized edge set (used by tests and
// the brute-force oracle; reflexive pairs included).
struct DeltaRelation {
  const CharSpaceSchema* schema = nullptr;
  const DistanceMeasure* measure = nullptr;
  MutationBounds bounds;
  bool materialized = false;
  EdgeSet edges;
  // Per-dense-id key when the bound relation is key-equivalent, else empty.
  std::vector<std::string> keys;
  bool keyed = false;

  bool contains(const TraceIndex& idx, std::uint32_t a, std::uint32_t b) const;
};

DeltaRelation build_delta(const TraceIndex& idx, const ObserverConfig& cfg,
                          bool materialize = false);
DeltaRelation delta_from_edges(std::vector<Edge> edges);

// AncestorOf = ((C ∪ R)+ ∩ Δ)+ and its covering relation with bare
// recognition steps removed (persistence is not reproduction).
struct AncestryGraph {
  std::size_t node_count = 0;
  std::vector<Edge> ancestor;  // sorted, unique
  std::vector<Edge> parent;    // sorted, unique
  // CSR adjacency (rows sorted) over ancestor/parent edges, both directions.
  std::vector<std::uint32_t> anc_off, anc_adj;
  std::vector<std::uint32_t> par_off, par_adj;
  std::vector<std::uint32_t> ranc_off, ranc_adj;
  std::vector<std::uint32_t> rpar_off, rpar_adj;

  bool is_ancestor(std::uint32_t a, std::uint32_t b) const;
  bool is_parent(std::uint32_t a, std::uint32_t b) const;
  std::vector<std::uint32_t> parent_children(std::uint32_t id) const;
  std::vector<std::uint32_t> parent_parents(std::uint32_t id) const;
  std::vector<std::uint32_t> descendants(std::uint32_t id) const;
  std::vector<std::uint32_t> ancestors(std::uint32_t id) const;
};

AncestryGraph ancestor_of(const TraceIndex& idx, const RecognitionMap& rec,
                          const CausalRelation& causal,
                          const DeltaRelation& delta);

struct LineageQueryResult {
  std::vector<EntityRef> ancestors;
  std::vector<EntityRef> descendants;
  std::vector<EntityRef> children;
};

LineageQueryResult lineage_query(const TraceIndex& idx,
                                 const AncestryGraph& graph,
                                 const EntityRef& ref);

// One edge per line: parent_state parent_id child_state child_id name.
void export_edges(std::ostream& out, const TraceIndex& idx,
                  const std::vector<Edge>& edges, const std::string& name);

// Everything the axiom checks consume, built in one pass.
struct RelationBundle {
  TraceIndex idx;
  RecognitionMap recognition;
  RecognitionVerdicts recognition_verdicts;
  CausalRelation causal;
  DeltaRelation delta;
  AncestryGraph graph;

  explicit RelationBundle(const Trace& t, const ObserverConfig& cfg);
};

}  // namespace alife
