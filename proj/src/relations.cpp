#include "alife/relations.hpp"

#include <algorithm>
#include <deque>
#include <ostream>

namespace alife {

namespace {

std::string ref_key(std::uint32_t state_index, const std::string& local_id) {
  return std::to_string(state_index) + "/" + local_id;
}

}  // namespace

TraceIndex::TraceIndex(const Trace& t) : trace(&t) {
  std::uint32_t pos = 0;
  for (const auto& st : t.states) {
    std::uint32_t begin = static_cast<std::uint32_t>(snaps.size());
    for (const auto& e : st.entities) {
      by_ref.emplace(ref_key(st.index, e.ref.local_id),
                     static_cast<std::uint32_t>(snaps.size()));
      snaps.push_back(&e);
      state_pos.push_back(pos);
    }
    ranges.emplace_back(begin, static_cast<std::uint32_t>(snaps.size()));
    ++pos;
  }
}

std::optional<std::uint32_t> TraceIndex::find(const EntityRef& r) const {
  auto it = by_ref.find(ref_key(r.state_index, r.local_id));
  if (it == by_ref.end()) return std::nullopt;
  return it->second;
}

std::uint32_t TraceIndex::require(const EntityRef& r) const {
  auto id = find(r);
  if (!id) throw std::runtime_error("no such entity: " + to_string(r));
  return *id;
}

void EdgeSet::finalize() {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

RecognitionMap build_recognition(const TraceIndex& idx,
                                 const ObserverConfig& cfg) {
  RecognitionMap rec;
  const auto& id = cfg.recognizer;
  if (id != "tag" && id != "langton-pivot" && id != "alchemy-tag")
    throw ConfigError("unknown recognizer: " + id);

  for (std::size_t p = 0; p + 1 < idx.ranges.size(); ++p) {
    auto [b0, e0] = idx.ranges[p];
    auto [b1, e1] = idx.ranges[p + 1];
    // States must be consecutive for a step to count as one observation step.
    const State& s0 = idx.trace->states[p];
    const State& s1 = idx.trace->states[p + 1];
    if (s1.index != s0.index + 1) continue;

    std::unordered_map<std::string, std::uint32_t> targets;
    for (std::uint32_t j = b1; j < e1; ++j)
      targets.emplace(tag_to_string(idx.snap(j).tag), j);

    for (std::uint32_t i = b0; i < e0; ++i) {
      std::string want;
      if (id == "alchemy-tag") {
        Tag t = idx.snap(i).tag;
        if (t.size() != 3 || !std::holds_alternative<std::int64_t>(t[2]))
          throw ConfigError("alchemy-tag recognizer requires (size,lex,mul)");
        t[2] = std::get<std::int64_t>(t[2]) + 1;
        want = tag_to_string(t);
      } else {
        want = tag_to_string(idx.snap(i).tag);
      }
      auto it = targets.find(want);
      if (it != targets.end()) rec.add(i, it->second);
    }
  }
  return rec;
}

RecognitionVerdicts validate_recognition(const TraceIndex& idx,
                                         const RecognitionMap& rec,
                                         const ObserverConfig& cfg) {
  RecognitionVerdicts v;
  const auto& schema = idx.trace->schema;
  const auto& measure = measure_by_id(cfg.measure);
  cfg.bounds.require_arity(schema.arity());

  std::vector<Edge> bad_step, bad_bound;
  std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> sources_of;
  for (const auto& [src, dst] : rec.next) {
    if (idx.state_index(dst) != idx.state_index(src) + 1)
      bad_step.emplace_back(src, dst);
    sources_of[dst].push_back(src);
    DiffVector d =
        diff(schema, measure, idx.snap(src).chars, idx.snap(dst).chars);
    if (!within_bounds(schema, d, cfg.bounds.delta_mut))
      bad_bound.emplace_back(src, dst);
  }

  auto render = [&](const Edge& e) {
    return to_string(idx.snap(e.first).ref) + " -> " +
           to_string(idx.snap(e.second).ref);
  };

  std::sort(bad_step.begin(), bad_step.end());
  if (bad_step.empty()) {
    v.step_forward = satisfied("every recognition edge advances one state");
  } else {
    v.step_forward = violated(std::to_string(bad_step.size()) +
                              " recognition edge(s) do not advance one state");
    for (const auto& e : bad_step) v.step_forward.witnesses.push_back(render(e));
  }

  std::vector<std::string> collisions;
  for (auto& [dst, srcs] : sources_of) {
    if (srcs.size() < 2) continue;
    std::sort(srcs.begin(), srcs.end());
    std::string w = to_string(idx.snap(dst).ref) + " <- {";
    for (std::size_t i = 0; i < srcs.size(); ++i) {
      if (i) w += ", ";
      w += to_string(idx.snap(srcs[i]).ref);
    }
    w += "}";
    collisions.push_back(std::move(w));
  }
  std::sort(collisions.begin(), collisions.end());
  if (collisions.empty()) {
    v.injective = satisfied("no two sources share a recognition target");
  } else {
    v.injective = violated(std::to_string(collisions.size()) +
                           " recognition target(s) shared by multiple sources");
    v.injective.witnesses = std::move(collisions);
  }

  std::sort(bad_bound.begin(), bad_bound.end());
  if (bad_bound.empty()) {
    v.bounded = satisfied("every recognition diff is within delta_mut");
  } else {
    v.bounded = violated(std::to_string(bad_bound.size()) +
                         " recognition edge(s) exceed delta_mut");
    for (const auto& e : bad_bound) v.bounded.witnesses.push_back(render(e));
  }
  return v;
}

CausalRelation build_causal(const TraceIndex& idx, const RecognitionMap& rec) {
  CausalRelation rel;
  for (const auto& st : idx.trace->states) {
    for (const auto& ev : st.causes) {
      auto p = idx.find(ev.parent);
      auto c = idx.find(ev.child);
      if (!p || !c) {
        rel.dropped.push_back({ev, "dangling-ref"});
        continue;
      }
      if (idx.state_index(*c) != idx.state_index(*p) + 1) {
        rel.dropped.push_back({ev, "bad-span"});
        continue;
      }
      if (rec.is_target(*c)) {
        rel.dropped.push_back({ev, "child-is-recognition-target"});
        continue;
      }
      rel.retained.add(*p, *c);
    }
  }
  rel.retained.finalize();
  return rel;
}

bool DeltaRelation::contains(const TraceIndex& idx, std::uint32_t a,
                             std::uint32_t b) const {
  if (materialized) return edges.contains(a, b);
  if (keyed) return keys[a] == keys[b];
  DiffVector d = diff(*schema, *measure, idx.snap(a).chars, idx.snap(b).chars);
  return within_bounds(*schema, d, bounds.delta_rep_mut);
}

DeltaRelation build_delta(const TraceIndex& idx, const ObserverConfig& cfg,
                          bool materialize) {
  DeltaRelation rel;
  rel.schema = &idx.trace->schema;
  rel.measure = &measure_by_id(cfg.measure);
  rel.bounds = cfg.bounds;
  rel.bounds.require_arity(rel.schema->arity());

  if (rel.measure->delta_key) {
    bool ok = true;
    rel.keys.reserve(idx.size());
    for (std::uint32_t i = 0; i < idx.size() && ok; ++i) {
      auto k = rel.measure->delta_key(*rel.schema, rel.bounds,
                                      idx.snap(i).chars);
      if (!k) {
        ok = false;
        break;
      }
      rel.keys.push_back(std::move(*k));
    }
    if (ok && idx.size() > 0)
      rel.keyed = true;
    else
      rel.keys.clear();
  }

  if (materialize) {
    // Quadratic by definition: every ordered pair within the bound,
    // including reflexive ones (a zero diff is within any bound).
    for (std::uint32_t a = 0; a < idx.size(); ++a)
      for (std::uint32_t b = 0; b < idx.size(); ++b) {
        bool in;
        if (rel.keyed) {
          in = rel.keys[a] == rel.keys[b];
        } else {
          DiffVector d = diff(*rel.schema, *rel.measure, idx.snap(a).chars,
                              idx.snap(b).chars);
          in = within_bounds(*rel.schema, d, rel.bounds.delta_rep_mut);
        }
        if (in) rel.edges.add(a, b);
      }
    rel.edges.finalize();
    rel.materialized = true;
  }
  return rel;
}

DeltaRelation delta_from_edges(std::vector<Edge> edges) {
  DeltaRelation rel;
  rel.materialized = true;
  for (const auto& [a, b] : edges) rel.edges.add(a, b);
  rel.edges.finalize();
  return rel;
}

namespace {

struct Csr {
  std::vector<std::uint32_t> off, adj;
};

Csr build_csr(std::size_t n, const std::vector<Edge>& edges, bool reverse) {
  Csr csr;
  csr.off.assign(n + 1, 0);
  for (const auto& [a, b] : edges) ++csr.off[(reverse ? b : a) + 1];
  for (std::size_t i = 0; i < n; ++i) csr.off[i + 1] += csr.off[i];
  csr.adj.resize(edges.size());
  std::vector<std::uint32_t> cur(csr.off.begin(), csr.off.end() - 1);
  // Edges are sorted by (a,b); forward rows come out sorted. Reverse rows are
  // sorted afterwards.
  for (const auto& [a, b] : edges)
    csr.adj[cur[reverse ? b : a]++] = reverse ? a : b;
  if (reverse)
    for (std::size_t i = 0; i < n; ++i)
      std::sort(csr.adj.begin() + csr.off[i], csr.adj.begin() + csr.off[i + 1]);
  return csr;
}

bool row_contains(const Csr& csr, std::uint32_t a, std::uint32_t b) {
  auto begin = csr.adj.begin() + csr.off[a];
  auto end = csr.adj.begin() + csr.off[a + 1];
  return std::binary_search(begin, end, b);
}

}  // namespace

bool AncestryGraph::is_ancestor(std::uint32_t a, std::uint32_t b) const {
  auto begin = anc_adj.begin() + anc_off[a];
  auto end = anc_adj.begin() + anc_off[a + 1];
  return std::binary_search(begin, end, b);
}

bool AncestryGraph::is_parent(std::uint32_t a, std::uint32_t b) const {
  auto begin = par_adj.begin() + par_off[a];
  auto end = par_adj.begin() + par_off[a + 1];
  return std::binary_search(begin, end, b);
}

std::vector<std::uint32_t> AncestryGraph::parent_children(
    std::uint32_t id) const {
  return {par_adj.begin() + par_off[id], par_adj.begin() + par_off[id + 1]};
}

std::vector<std::uint32_t> AncestryGraph::parent_parents(
    std::uint32_t id) const {
  return {rpar_adj.begin() + rpar_off[id], rpar_adj.begin() + rpar_off[id + 1]};
}

std::vector<std::uint32_t> AncestryGraph::descendants(std::uint32_t id) const {
  return {anc_adj.begin() + anc_off[id], anc_adj.begin() + anc_off[id + 1]};
}

std::vector<std::uint32_t> AncestryGraph::ancestors(std::uint32_t id) const {
  return {ranc_adj.begin() + ranc_off[id], ranc_adj.begin() + ranc_off[id + 1]};
}

AncestryGraph ancestor_of(const TraceIndex& idx, const RecognitionMap& rec,
                          const CausalRelation& causal,
                          const DeltaRelation& delta) {
  const std::uint32_t n = static_cast<std::uint32_t>(idx.size());
  AncestryGraph g;
  g.node_count = n;
  if (n == 0) {
    g.anc_off.assign(1, 0);
    g.par_off.assign(1, 0);
    g.ranc_off.assign(1, 0);
    g.rpar_off.assign(1, 0);
    return g;
  }

  // Step graph C ∪ R. Dense ids are state-major, so every edge goes to a
  // strictly larger id and descending-id order is a reverse topological order.
  std::vector<std::vector<std::uint32_t>> step(n);
  for (const auto& [src, dst] : rec.next) {
    if (dst <= src) throw std::runtime_error("recognition edge not forward");
    step[src].push_back(dst);
  }
  for (const auto& [a, b] : causal.retained.edges) {
    if (b <= a) throw std::runtime_error("causal edge not forward");
    step[a].push_back(b);
  }

  // Inner = (C ∪ R)+ ∩ Δ via blocked reachability bitsets.
  std::vector<Edge> inner;
  std::unordered_map<std::string, std::vector<std::uint32_t>> groups;
  if (delta.keyed) {
    for (std::uint32_t i = 0; i < n; ++i) groups[delta.keys[i]].push_back(i);
  }

  constexpr std::uint32_t kBlock = 4096;
  for (std::uint32_t lo = 0; lo < n; lo += kBlock) {
    const std::uint32_t hi = std::min(n, lo + kBlock);
    const std::uint32_t words = (hi - lo + 63) / 64;
    std::vector<std::uint64_t> bits(static_cast<std::size_t>(n) * words, 0);
    for (std::uint32_t a = n; a-- > 0;) {
      std::uint64_t* row = &bits[static_cast<std::size_t>(a) * words];
      for (std::uint32_t b : step[a]) {
        const std::uint64_t* rb = &bits[static_cast<std::size_t>(b) * words];
        for (std::uint32_t w = 0; w < words; ++w) row[w] |= rb[w];
        if (b >= lo && b < hi) row[(b - lo) >> 6] |= 1ull << ((b - lo) & 63);
      }
    }
    auto reach = [&](std::uint32_t a, std::uint32_t b) {
      return (bits[static_cast<std::size_t>(a) * words + ((b - lo) >> 6)] >>
              ((b - lo) & 63)) &
             1u;
    };

    if (delta.keyed) {
      for (auto& [key, members] : groups) {
        for (std::uint32_t bi = 0; bi < members.size(); ++bi) {
          std::uint32_t b = members[bi];
          if (b < lo || b >= hi) continue;
          for (std::uint32_t ai = 0; ai < bi; ++ai) {
            std::uint32_t a = members[ai];
            if (reach(a, b)) inner.emplace_back(a, b);
          }
        }
      }
    } else if (delta.materialized) {
      for (const auto& [a, b] : delta.edges.edges) {
        if (b < lo || b >= hi || a >= b) continue;
        if (reach(a, b)) inner.emplace_back(a, b);
      }
    } else {
      for (std::uint32_t a = 0; a < n; ++a) {
        const std::uint64_t* row = &bits[static_cast<std::size_t>(a) * words];
        for (std::uint32_t w = 0; w < words; ++w) {
          std::uint64_t m = row[w];
          while (m) {
            std::uint32_t bit = static_cast<std::uint32_t>(__builtin_ctzll(m));
            m &= m - 1;
            std::uint32_t b = lo + w * 64 + bit;
            if (delta.contains(idx, a, b)) inner.emplace_back(a, b);
          }
        }
      }
    }
  }
  std::sort(inner.begin(), inner.end());
  inner.erase(std::unique(inner.begin(), inner.end()), inner.end());

  // AncestorOf = Inner+. With a keyed Δ, Inner is already transitive
  // (reachability and key equality both compose), so the closure is Inner
  // itself; otherwise saturate.
  if (delta.keyed) {
    g.ancestor = std::move(inner);
  } else {
    std::vector<std::vector<std::uint32_t>> inner_adj(n);
    for (const auto& [a, b] : inner) inner_adj[a].push_back(b);
    EdgeSet closure;
    std::deque<Edge> work(inner.begin(), inner.end());
    for (const auto& [a, b] : inner) closure.add(a, b);
    while (!work.empty()) {
      auto [a, b] = work.front();
      work.pop_front();
      for (std::uint32_t c : inner_adj[b])
        if (closure.add(a, c)) work.emplace_back(a, c);
    }
    closure.finalize();
    g.ancestor = std::move(closure.edges);
  }

  Csr anc = build_csr(n, g.ancestor, false);
  g.anc_off = anc.off;
  g.anc_adj = anc.adj;

  // Parent: covering pairs of AncestorOf, minus bare recognition steps
  // (persistence is not reproduction).
  for (const auto& [a, c] : g.ancestor) {
    bool covered = false;
    for (std::uint32_t i = anc.off[a]; i < anc.off[a + 1]; ++i) {
      std::uint32_t e = anc.adj[i];
      if (e == c) continue;
      if (e > c) break;  // rows sorted; intermediate must precede c
      if (row_contains(anc, e, c)) {
        covered = true;
        break;
      }
    }
    if (!covered && !rec.is_edge(a, c)) g.parent.emplace_back(a, c);
  }

  Csr par = build_csr(n, g.parent, false);
  g.par_off = par.off;
  g.par_adj = par.adj;
  Csr ranc = build_csr(n, g.ancestor, true);
  g.ranc_off = ranc.off;
  g.ranc_adj = ranc.adj;
  Csr rpar = build_csr(n, g.parent, true);
  g.rpar_off = rpar.off;
  g.rpar_adj = rpar.adj;
  return g;
}

LineageQueryResult lineage_query(const TraceIndex& idx,
                                 const AncestryGraph& graph,
                                 const EntityRef& ref) {
  std::uint32_t id = idx.require(ref);
  LineageQueryResult res;
  for (std::uint32_t a : graph.ancestors(id))
    res.ancestors.push_back(idx.snap(a).ref);
  for (std::uint32_t d : graph.descendants(id))
    res.descendants.push_back(idx.snap(d).ref);
  for (std::uint32_t c : graph.parent_children(id))
    res.children.push_back(idx.snap(c).ref);
  return res;
}

void export_edges(std::ostream& out, const TraceIndex& idx,
                  const std::vector<Edge>& edges, const std::string& name) {
  for (const auto& [a, b] : edges) {
    const auto& pa = idx.snap(a).ref;
    const auto& pb = idx.snap(b).ref;
    out << pa.state_index << ' ' << pa.local_id << ' ' << pb.state_index << ' '
        << pb.local_id << ' ' << name << '\n';
  }
}

RelationBundle::RelationBundle(const Trace& t, const ObserverConfig& cfg)
    : idx(t),
      recognition(build_recognition(idx, cfg)),
      recognition_verdicts(validate_recognition(idx, recognition, cfg)),
      causal(build_causal(idx, recognition)),
      delta(build_delta(idx, cfg)),
      graph(ancestor_of(idx, recognition, causal, delta)) {}

}  // namespace alife
