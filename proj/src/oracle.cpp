#include "alife/oracle.hpp"

#include <algorithm>

namespace alife {
namespace oracle {

namespace {

std::vector<Edge> transitive_closure(std::size_t n, std::vector<Edge> rel) {
  std::unordered_set<std::uint64_t> have;
  for (const auto& [a, b] : rel) have.insert(edge_key(a, b));
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (const auto& [a, b] : rel) adj[a].push_back(b);
    std::vector<Edge> found;
    for (const auto& [a, b] : rel)
      for (std::uint32_t c : adj[b])
        if (have.insert(edge_key(a, c)).second) found.emplace_back(a, c);
    if (!found.empty()) {
      changed = true;
      rel.insert(rel.end(), found.begin(), found.end());
    }
  }
  std::sort(rel.begin(), rel.end());
  rel.erase(std::unique(rel.begin(), rel.end()), rel.end());
  return rel;
}

}  // namespace

BruteAncestry brute_ancestor_of(const TraceIndex& idx,
                                const RecognitionMap& rec,
                                const CausalRelation& causal,
                                const DeltaRelation& delta) {
  const std::size_t n = idx.size();
  std::vector<Edge> base;
  for (const auto& [src, dst] : rec.next) base.emplace_back(src, dst);
  for (const auto& e : causal.retained.edges) base.push_back(e);
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());

  std::vector<Edge> step_closed = transitive_closure(n, std::move(base));

  std::vector<Edge> inner;
  for (const auto& [a, b] : step_closed)
    if (delta.contains(idx, a, b)) inner.emplace_back(a, b);

  BruteAncestry out;
  out.ancestor = transitive_closure(n, std::move(inner));

  std::unordered_set<std::uint64_t> anc;
  for (const auto& [a, b] : out.ancestor) anc.insert(edge_key(a, b));
  for (const auto& [a, c] : out.ancestor) {
    bool interposed = false;
    for (std::uint32_t e = 0; e < n && !interposed; ++e)
      if (e != a && e != c && anc.count(edge_key(a, e)) &&
          anc.count(edge_key(e, c)))
        interposed = true;
    if (!interposed && !rec.is_edge(a, c)) out.parent.emplace_back(a, c);
  }
  return out;
}

}  // namespace oracle
}  // namespace alife
