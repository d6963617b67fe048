#include "alife/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace alife {

namespace {

constexpr std::size_t kMaxWitnesses = 4;

DiffVector pair_diff(const TraceIndex& idx, const ObserverConfig& cfg,
                     std::uint32_t a, std::uint32_t b) {
  const CharSpaceSchema& schema = idx.trace->schema;
  return measure_by_id(cfg.measure)
      .apply(schema, idx.snap(a).chars, idx.snap(b).chars);
}

std::string pair_label(const TraceIndex& idx, std::uint32_t a,
                       std::uint32_t b) {
  const EntityRef& pa = idx.snap(a).ref;
  const EntityRef& pb = idx.snap(b).ref;
  std::ostringstream os;
  os << pa.state_index << "/" << pa.local_id << " -> " << pb.state_index << "/"
     << pb.local_id;
  return os.str();
}

std::string instance_label(const TraceIndex& idx, std::uint32_t a) {
  const EntityRef& r = idx.snap(a).ref;
  std::ostringstream os;
  os << r.state_index << "/" << r.local_id;
  return os.str();
}

bool window_has_entities(const TraceIndex& idx, const AnalysisWindow& w) {
  for (std::uint32_t id = 0; id < idx.size(); ++id) {
    if (w.contains(idx.state_index(id))) return true;
  }
  return false;
}

std::string chars_key(const EntitySnapshot& snap) {
  std::ostringstream os;
  for (std::size_t i = 0; i < snap.chars.size(); ++i) {
    if (i) os << '\x1f';
    os << char_value_to_string(snap.chars[i]);
  }
  return os.str();
}

}  // namespace

ChainIndex build_chains(const TraceIndex& idx, const RecognitionMap& rec) {
  ChainIndex chains;
  const std::uint32_t n = static_cast<std::uint32_t>(idx.size());
  chains.chain_of.assign(n, 0);
  std::vector<bool> assigned(n, false);
  for (std::uint32_t id = 0; id < n; ++id) {
    if (assigned[id] || rec.is_target(id)) continue;
    const std::uint32_t chain = static_cast<std::uint32_t>(chains.root_of.size());
    chains.root_of.push_back(id);
    chains.members.emplace_back();
    std::uint32_t cur = id;
    while (true) {
      chains.chain_of[cur] = chain;
      assigned[cur] = true;
      chains.members[chain].push_back(cur);
      auto next = rec.at(cur);
      if (!next || assigned[*next]) break;
      cur = *next;
    }
  }
  // Defensive: if recognition failed injectivity, some targets may be
  // unassigned (their source chain claimed them first). Give each leftover
  // its own chain so downstream counts stay total.
  for (std::uint32_t id = 0; id < n; ++id) {
    if (assigned[id]) continue;
    const std::uint32_t chain = static_cast<std::uint32_t>(chains.root_of.size());
    chains.root_of.push_back(id);
    chains.members.push_back({id});
    chains.chain_of[id] = chain;
    assigned[id] = true;
  }
  return chains;
}

GenerationPartition generations(const TraceIndex& idx,
                                const AncestryGraph& graph,
                                const ChainIndex& chains,
                                const std::vector<EntityRef>& founders) {
  GenerationPartition part;
  std::vector<bool> chain_assigned(chains.root_of.size(), false);
  std::vector<std::uint32_t> frontier;
  for (const EntityRef& ref : founders) {
    const std::uint32_t id = idx.require(ref);
    const std::uint32_t chain = chains.chain_of[id];
    if (!chain_assigned[chain]) {
      chain_assigned[chain] = true;
      frontier.push_back(chain);
    }
  }
  std::sort(frontier.begin(), frontier.end());
  while (!frontier.empty()) {
    std::vector<std::uint32_t> roots;
    roots.reserve(frontier.size());
    for (std::uint32_t chain : frontier) {
      roots.push_back(chains.root_of[chain]);
    }
    std::sort(roots.begin(), roots.end());
    part.generations.push_back(std::move(roots));
    std::vector<std::uint32_t> next;
    for (std::uint32_t chain : frontier) {
      for (std::uint32_t member : chains.members[chain]) {
        for (std::uint32_t child : graph.parent_children(member)) {
          const std::uint32_t child_chain = chains.chain_of[child];
          if (!chain_assigned[child_chain]) {
            chain_assigned[child_chain] = true;
            next.push_back(child_chain);
          }
        }
      }
    }
    std::sort(next.begin(), next.end());
    frontier = std::move(next);
  }
  return part;
}

std::vector<Edge> parent_pairs_in_window(const TraceIndex& idx,
                                         const AncestryGraph& graph,
                                         const AnalysisWindow& w) {
  std::vector<Edge> pairs;
  for (const Edge& e : graph.parent) {
    if (idx.state_index(e.first) >= w.first &&
        idx.state_index(e.second) <= w.last) {
      pairs.push_back(e);
    }
  }
  return pairs;
}

bool is_mutant_pair(const TraceIndex& idx, const ObserverConfig& cfg,
                    const Edge& pair) {
  const CharSpaceSchema& schema = idx.trace->schema;
  const DiffVector d = pair_diff(idx, cfg, pair.first, pair.second);
  for (std::size_t i = 0; i < schema.dims.size(); ++i) {
    if (schema.dims[i].char_ordered && d[i] != 0) return true;
  }
  return false;
}

Verdict check_reproduction(const TraceIndex& idx, const AncestryGraph& graph,
                           const AnalysisWindow& w) {
  if (!window_has_entities(idx, w)) {
    return undetermined("no entities inside the analysis window");
  }
  std::vector<std::string> witnesses;
  std::size_t count = 0;
  for (const Edge& e : graph.parent) {
    if (idx.state_index(e.first) < w.first ||
        idx.state_index(e.second) > w.last) {
      continue;
    }
    ++count;
    if (witnesses.size() < kMaxWitnesses) {
      witnesses.push_back(pair_label(idx, e.first, e.second));
    }
  }
  if (count == 0) {
    Verdict v = violated("no parent-child pair inside the analysis window");
    std::ostringstream os;
    os << "window " << w.first << ".." << w.last << " holds 0 parent edges";
    v.witnesses.push_back(os.str());
    return v;
  }
  Verdict v = satisfied("parent-child pairs observed");
  v.witnesses = std::move(witnesses);
  v.details["parent_pairs"] = std::to_string(count);
  return v;
}

Verdict check_fecundity(const GenerationPartition& part,
                        const SelectionThresholds& thresholds) {
  const std::size_t k = part.generations.size();
  if (k < 2) {
    return undetermined("fewer than two generations observed");
  }
  const std::size_t tail = thresholds.fecundity_tail;
  if (k <= tail) {
    return undetermined("all generations fall inside the tail margin");
  }
  Verdict v = satisfied("no generation outgrows all of its successors");
  for (std::size_t i = 0; i + tail < k; ++i) {
    const std::size_t size_i = part.generations[i].size();
    bool matched = false;
    for (std::size_t j = i + 1; j < k; ++j) {
      if (part.generations[j].size() >= size_i) {
        matched = true;
        break;
      }
    }
    if (!matched) {
      std::ostringstream os;
      os << "generation " << (i + 1) << " (size " << size_i
         << ") exceeds every later generation";
      Verdict bad = violated(os.str());
      bad.witnesses.push_back(os.str());
      return bad;
    }
  }
  std::ostringstream sizes;
  for (std::size_t i = 0; i < k; ++i) {
    if (i) sizes << ',';
    sizes << part.generations[i].size();
  }
  v.witnesses.push_back("generation sizes " + sizes.str());
  v.details["generation_sizes"] = sizes.str();
  v.details["generations"] = std::to_string(k);
  return v;
}

Verdict check_preservation(const TraceIndex& idx, const AncestryGraph& graph,
                           const RecognitionMap& rec,
                           const ObserverConfig& cfg, const AnalysisWindow& w) {
  const std::vector<Edge> pairs = parent_pairs_in_window(idx, graph, w);
  std::vector<Edge> mutants;
  for (const Edge& e : pairs) {
    if (is_mutant_pair(idx, cfg, e)) mutants.push_back(e);
  }
  if (mutants.empty()) {
    return undetermined("no reproductive mutation inside the analysis window");
  }
  std::size_t preserved = 0;
  std::vector<std::string> witnesses;
  for (const Edge& e : mutants) {
    // Does the mutant child's own chain reproduce, from the child onward?
    bool reproduces = false;
    std::uint32_t cur = e.second;
    while (true) {
      if (!graph.parent_children(cur).empty()) {
        reproduces = true;
        break;
      }
      auto next = rec.at(cur);
      if (!next) break;
      cur = *next;
    }
    if (reproduces) {
      ++preserved;
      if (witnesses.size() < kMaxWitnesses) {
        witnesses.push_back(pair_label(idx, e.first, e.second));
      }
    }
  }
  Verdict v;
  if (preserved > 0) {
    v = satisfied("at least one mutant lineage reproduced");
    v.witnesses = std::move(witnesses);
  } else {
    v = violated("no mutant lineage reproduced");
    for (std::size_t i = 0; i < mutants.size() && i < kMaxWitnesses; ++i) {
      v.witnesses.push_back(
          pair_label(idx, mutants[i].first, mutants[i].second));
    }
  }
  v.details["mutant_pairs"] = std::to_string(mutants.size());
  v.details["preserved"] = std::to_string(preserved);
  return v;
}

HeredityResult heredity_ratio(const TraceIndex& idx,
                              const AncestryGraph& graph,
                              const ObserverConfig& cfg,
                              const AnalysisWindow& w, std::size_t dim) {
  HeredityResult r;
  r.dim = idx.trace->schema.dims.at(dim).name;
  if (w.length() < cfg.thresholds.min_window_len) {
    r.verdict = undetermined("analysis window shorter than min_window_len");
    return r;
  }
  const std::vector<Edge> pairs = parent_pairs_in_window(idx, graph, w);
  r.parent_pairs = pairs.size();
  for (const Edge& e : pairs) {
    const DiffVector d = pair_diff(idx, cfg, e.first, e.second);
    if (d.at(dim) == 0) ++r.inherited;
  }
  if (r.inherited == 0) {
    r.verdict = undetermined("no inheriting parent-child pair in window");
    return r;
  }
  r.ratio = static_cast<double>(r.parent_pairs) /
            static_cast<double>(r.inherited);
  if (r.ratio <= cfg.thresholds.heredity_ratio_tol) {
    r.verdict = satisfied("parent-to-inherited ratio within tolerance");
  } else {
    std::ostringstream os;
    os << "ratio " << r.ratio << " exceeds tolerance "
       << cfg.thresholds.heredity_ratio_tol;
    r.verdict = violated(os.str());
  }
  std::ostringstream wit;
  wit << "dimension " << r.dim << ": " << r.parent_pairs << " parent pairs / "
      << r.inherited << " inherited";
  r.verdict.witnesses.push_back(wit.str());
  r.verdict.details["ratio"] = std::to_string(r.ratio);
  r.verdict.details["parent_pairs"] = std::to_string(r.parent_pairs);
  r.verdict.details["inherited"] = std::to_string(r.inherited);
  return r;
}

ReproducingSet reproducing_set(const TraceIndex& idx,
                               const AncestryGraph& graph,
                               const ChainIndex& chains,
                               const ObserverConfig& cfg,
                               const AnalysisWindow& w) {
  ReproducingSet out;
  std::set<std::uint32_t> seen_chains;
  for (std::uint32_t id = 0; id < idx.size(); ++id) {
    if (!w.contains(idx.state_index(id))) continue;
    bool has_child_in_window = false;
    for (std::uint32_t child : graph.parent_children(id)) {
      if (idx.state_index(child) <= w.last) {
        has_child_in_window = true;
        break;
      }
    }
    if (!has_child_in_window) continue;
    out.members.push_back(id);
    // Instances come out ascending by dense id (state-major), so the first
    // member seen for a chain is its earliest reproducing instance.
    if (seen_chains.insert(chains.chain_of[id]).second) {
      out.lineages.push_back(id);
    }
  }
  const std::size_t window_len = w.length();
  if (window_len < cfg.thresholds.min_window_len) {
    out.verdict = undetermined("analysis window shorter than min_window_len");
  } else if (out.lineages.size() < cfg.thresholds.min_reproducers) {
    std::ostringstream os;
    os << "only " << out.lineages.size()
       << " reproducing lineages observed (need "
       << cfg.thresholds.min_reproducers << ")";
    out.verdict = undetermined(os.str());
  } else {
    out.verdict = satisfied("window long enough and reproducers abundant");
    for (std::size_t i = 0; i < out.lineages.size() && i < kMaxWitnesses; ++i) {
      out.verdict.witnesses.push_back(instance_label(idx, out.lineages[i]));
    }
  }
  out.verdict.details["reproducing_lineages"] =
      std::to_string(out.lineages.size());
  out.verdict.details["reproducing_instances"] =
      std::to_string(out.members.size());
  out.verdict.details["window_len"] = std::to_string(window_len);
  return out;
}

std::int64_t rate_rep(const TraceIndex& idx, const AncestryGraph& graph,
                      const RecognitionMap& rec, const ObserverConfig& cfg,
                      std::uint32_t id) {
  std::int64_t count = 0;
  std::uint32_t cur = id;
  while (true) {
    count += static_cast<std::int64_t>(graph.parent_children(cur).size());
    auto next = rec.at(cur);
    if (!next) break;
    const DiffVector d = pair_diff(idx, cfg, cur, *next);
    bool changed = false;
    for (std::int64_t x : d) {
      if (x != 0) {
        changed = true;
        break;
      }
    }
    if (changed) break;
    cur = *next;
  }
  return count;
}

Verdict check_sorting(const TraceIndex& idx, const AncestryGraph& graph,
                      const RecognitionMap& rec, const ObserverConfig& cfg,
                      const AnalysisWindow& w) {
  const ChainIndex chains = build_chains(idx, rec);
  const ReproducingSet repro = reproducing_set(idx, graph, chains, cfg, w);
  if (repro.verdict.status != Status::Satisfied) {
    Verdict v = undetermined(
        "evolutionary time scale not reached: " + repro.verdict.reason);
    v.details = repro.verdict.details;
    return v;
  }
  bool chars_differ = false;
  std::set<std::string> char_vectors;
  std::set<std::int64_t> rates;
  for (std::uint32_t id : repro.lineages) {
    char_vectors.insert(chars_key(idx.snap(id)));
    rates.insert(rate_rep(idx, graph, rec, cfg, id));
    if (char_vectors.size() > 1) chars_differ = true;
  }
  Verdict v;
  if (!chars_differ) {
    v = undetermined("all reproducing lineages share one character vector");
  } else if (rates.size() > 1) {
    v = satisfied("distinct characters coincide with distinct rates");
  } else {
    v = violated("characters differ but every reproduction rate is equal");
  }
  if (v.status != Status::Undetermined) {
    for (std::size_t i = 0; i < repro.lineages.size() && i < kMaxWitnesses;
         ++i) {
      const std::uint32_t id = repro.lineages[i];
      std::ostringstream os;
      os << instance_label(idx, id) << " rate "
         << rate_rep(idx, graph, rec, cfg, id);
      v.witnesses.push_back(os.str());
    }
  }
  v.details["distinct_char_vectors"] = std::to_string(char_vectors.size());
  v.details["distinct_rates"] = std::to_string(rates.size());
  v.details["reproducers"] = std::to_string(repro.lineages.size());
  return v;
}

VariationResult heritable_variation(const TraceIndex& idx,
                                    const AncestryGraph& graph,
                                    const ObserverConfig& cfg,
                                    const AnalysisWindow& w) {
  VariationResult out;
  const std::vector<Edge> pairs = parent_pairs_in_window(idx, graph, w);
  std::set<std::uint32_t> children;
  for (const Edge& e : pairs) {
    if (is_mutant_pair(idx, cfg, e)) children.insert(e.second);
  }
  out.child_mut.assign(children.begin(), children.end());
  std::set<std::string> seen;
  for (std::uint32_t id : out.child_mut) {
    if (seen.insert(chars_key(idx.snap(id))).second) {
      out.var_child_mut.push_back(id);
    }
  }
  if (out.child_mut.empty()) {
    out.verdict =
        undetermined("no reproductive mutation inside the analysis window");
  } else if (out.var_child_mut.size() >= cfg.thresholds.min_variant_children) {
    out.verdict = satisfied("mutant children span enough distinct variants");
  } else {
    std::ostringstream os;
    os << "only " << out.var_child_mut.size()
       << " distinct mutant variants observed (need "
       << cfg.thresholds.min_variant_children << ")";
    out.verdict = violated(os.str());
  }
  for (std::size_t i = 0; i < out.var_child_mut.size() && i < kMaxWitnesses;
       ++i) {
    out.verdict.witnesses.push_back(instance_label(idx, out.var_child_mut[i]));
  }
  out.verdict.details["mutant_children"] = std::to_string(out.child_mut.size());
  out.verdict.details["distinct_variants"] =
      std::to_string(out.var_child_mut.size());
  return out;
}

namespace {

// Spearman rank correlation with average ranks for ties; diagnostic only.
double spearman(const std::vector<std::int64_t>& xs,
                const std::vector<std::int64_t>& ys) {
  const std::size_t n = xs.size();
  auto ranks = [n](const std::vector<std::int64_t>& v) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&v](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> rank(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
      const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
      i = j + 1;
    }
    return rank;
  };
  const std::vector<double> rx = ranks(xs);
  const std::vector<double> ry = ranks(ys);
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double num = 0, dx = 0, dy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (rx[i] - mx) * (ry[i] - my);
    dx += (rx[i] - mx) * (rx[i] - mx);
    dy += (ry[i] - my) * (ry[i] - my);
  }
  if (dx == 0.0 || dy == 0.0) return 0.0;
  return num / std::sqrt(dx * dy);
}

}  // namespace

Verdict check_correlation(const TraceIndex& idx, const AncestryGraph& graph,
                          const RecognitionMap& rec, const ObserverConfig& cfg,
                          const AnalysisWindow& w) {
  const VariationResult var = heritable_variation(idx, graph, cfg, w);
  if (var.var_child_mut.size() < 2) {
    Verdict v = undetermined("fewer than two distinct mutant variants");
    v.details["distinct_variants"] = std::to_string(var.var_child_mut.size());
    return v;
  }
  const CharSpaceSchema& schema = idx.trace->schema;
  std::vector<std::size_t> ordered_dims;
  for (std::size_t i = 0; i < schema.dims.size(); ++i) {
    if (schema.dims[i].char_ordered) ordered_dims.push_back(i);
  }
  if (ordered_dims.empty()) {
    return undetermined("no dimension carries an ordered character");
  }
  std::vector<std::int64_t> rates;
  rates.reserve(var.var_child_mut.size());
  for (std::uint32_t id : var.var_child_mut) {
    rates.push_back(rate_rep(idx, graph, rec, cfg, id));
  }
  Verdict v;
  bool any_dim_passes = false;
  std::string passing_dim;
  for (std::size_t dim : ordered_dims) {
    bool pass = true;
    std::vector<std::int64_t> values;
    values.reserve(var.var_child_mut.size());
    for (std::uint32_t id : var.var_child_mut) {
      const CharValue& cv = idx.snap(id).chars.at(dim);
      if (!std::holds_alternative<std::int64_t>(cv)) {
        pass = false;
        break;
      }
      values.push_back(std::get<std::int64_t>(cv));
    }
    if (values.size() == var.var_child_mut.size()) {
      for (std::size_t a = 0; a < values.size() && pass; ++a) {
        for (std::size_t b = a + 1; b < values.size(); ++b) {
          const bool char_differs = values[a] != values[b];
          const bool rate_differs = rates[a] != rates[b];
          if (char_differs != rate_differs) {
            pass = false;
            break;
          }
        }
      }
      std::ostringstream rho;
      rho << spearman(values, rates);
      v.details["spearman_" + schema.dims[dim].name] = rho.str();
    }
    if (pass) {
      any_dim_passes = true;
      if (passing_dim.empty()) passing_dim = schema.dims[dim].name;
    }
  }
  v.details["distinct_variants"] = std::to_string(var.var_child_mut.size());
  if (any_dim_passes) {
    v.status = Status::Satisfied;
    v.reason = "character differences track rate differences in dimension " +
               passing_dim;
  } else {
    v.status = Status::Violated;
    v.reason = "no ordered dimension keeps character and rate differences "
               "in step";
  }
  for (std::size_t i = 0; i < var.var_child_mut.size() && i < kMaxWitnesses;
       ++i) {
    std::ostringstream os;
    os << instance_label(idx, var.var_child_mut[i]) << " rate " << rates[i];
    v.witnesses.push_back(os.str());
  }
  return v;
}

}  // namespace alife
