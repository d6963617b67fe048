#pragma once

#include "alife/config.hpp"
#include "alife/relations.hpp"
#include "alife/verdict.hpp"

namespace alife {

// Maximal recognition chains. A chain is the observer's notion of "the same
// entity over time"; chain roots stand in for lineages in population-level
// counts.
struct ChainIndex {
  std::vector<std::uint32_t> chain_of;  // dense id -> chain number
  std::vector<std::uint32_t> root_of;   // chain -> first instance
  std::vector<std::vector<std::uint32_t>> members;  // ascending by state
};

ChainIndex build_chains(const TraceIndex& idx, const RecognitionMap& rec);

struct GenerationPartition {
  // Each generation is a set of chain roots (dense ids), sorted.
  std::vector<std::vector<std::uint32_t>> generations;
};

// G_1 = the founders' chains; G_{i+1} = chains reached by a parent edge from
// any instance of a G_i chain, minus chains already assigned.
GenerationPartition generations(const TraceIndex& idx,
                                const AncestryGraph& graph,
                                const ChainIndex& chains,
                                const std::vector<EntityRef>& founders);

// Parent pairs with both endpoints inside the window.
std::vector<Edge> parent_pairs_in_window(const TraceIndex& idx,
                                         const AncestryGraph& graph,
                                         const AnalysisWindow& w);

// A reproductive mutation is a nonzero parent-child diff in a dimension
// whose character values carry a substantive order.
bool is_mutant_pair(const TraceIndex& idx, const ObserverConfig& cfg,
                    const Edge& pair);

Verdict check_reproduction(const TraceIndex& idx, const AncestryGraph& graph,
                           const AnalysisWindow& w);

Verdict check_fecundity(const GenerationPartition& part,
                        const SelectionThresholds& thresholds);

Verdict check_preservation(const TraceIndex& idx, const AncestryGraph& graph,
                           const RecognitionMap& rec,
                           const ObserverConfig& cfg, const AnalysisWindow& w);

struct HeredityResult {
  std::string dim;
  Verdict verdict;
  std::size_t parent_pairs = 0;
  std::size_t inherited = 0;
  double ratio = 0.0;  // meaningful only when inherited > 0
};

HeredityResult heredity_ratio(const TraceIndex& idx,
                              const AncestryGraph& graph,
                              const ObserverConfig& cfg,
                              const AnalysisWindow& w, std::size_t dim);

struct ReproducingSet {
  std::vector<std::uint32_t> members;   // instances in window with a child
  std::vector<std::uint32_t> lineages;  // earliest reproducing instance per chain
  Verdict verdict;                      // evolutionary time scale
};

// The population size that the time-scale threshold compares against is the
// number of distinct reproducing lineages (recognition chains), not instance
// snapshots: one entity persisting over many states is one population member.
ReproducingSet reproducing_set(const TraceIndex& idx,
                               const AncestryGraph& graph,
                               const ChainIndex& chains,
                               const ObserverConfig& cfg,
                               const AnalysisWindow& w);

// Children attributed to the entity along its recognition chain from this
// instance forward, stopping (exclusive) at the first chain step whose diff
// is nonzero in any dimension. Zero is a legitimate rate.
std::int64_t rate_rep(const TraceIndex& idx, const AncestryGraph& graph,
                      const RecognitionMap& rec, const ObserverConfig& cfg,
                      std::uint32_t id);

Verdict check_sorting(const TraceIndex& idx, const AncestryGraph& graph,
                      const RecognitionMap& rec, const ObserverConfig& cfg,
                      const AnalysisWindow& w);

struct VariationResult {
  Verdict verdict;
  std::vector<std::uint32_t> child_mut;      // mutant children, sorted
  std::vector<std::uint32_t> var_child_mut;  // one per distinct char vector
};

VariationResult heritable_variation(const TraceIndex& idx,
                                    const AncestryGraph& graph,
                                    const ObserverConfig& cfg,
                                    const AnalysisWindow& w);

Verdict check_correlation(const TraceIndex& idx, const AncestryGraph& graph,
                          const RecognitionMap& rec, const ObserverConfig& cfg,
                          const AnalysisWindow& w);

}  // namespace alife
