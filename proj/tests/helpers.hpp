#pragma once

// Shared fixtures: a small trace builder and a generator of random
// relation instances used to cross-check the ancestry algebra against the
// brute-force oracle.

#include <algorithm>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "alife/relations.hpp"
#include "alife/rng.hpp"
#include "alife/trace.hpp"

namespace testutil {

class TraceBuilder {
 public:
  TraceBuilder(std::string model, alife::CharSpaceSchema schema) {
    trace_.meta.model = std::move(model);
    trace_.meta.config_digest = "test";
    trace_.schema = std::move(schema);
  }

  TraceBuilder& entity(std::uint32_t state, const std::string& id,
                       alife::CharVector chars) {
    ensure_state(state);
    alife::EntitySnapshot e;
    e.ref = {state, id};
    e.tag = {id};
    e.chars = std::move(chars);
    trace_.states[state].entities.push_back(std::move(e));
    return *this;
  }

  TraceBuilder& cause(std::uint32_t parent_state, const std::string& parent_id,
                      std::uint32_t child_state, const std::string& child_id) {
    ensure_state(child_state);
    trace_.states[child_state].causes.push_back(
        {{parent_state, parent_id}, {child_state, child_id}});
    return *this;
  }

  alife::Trace build() const { return trace_; }

 private:
  void ensure_state(std::uint32_t state) {
    while (trace_.states.size() <= state) {
      alife::State st;
      st.index = static_cast<std::uint32_t>(trace_.states.size());
      trace_.states.push_back(std::move(st));
    }
  }

  alife::Trace trace_;
};

inline alife::CharSpaceSchema trait_schema() {
  alife::CharSpaceSchema s;
  s.dims.push_back({"trait", alife::DimKind::Int, true, true});
  return s;
}

// Tag recognition over the single trait dimension, equality measure, an
// exact recognition bound, an unconstrained reproduction bound, and
// thresholds relaxed so short fixtures stay determinable.
inline alife::ObserverConfig relaxed_trait_observer() {
  alife::ObserverConfig cfg;
  cfg.recognizer = "tag";
  cfg.measure = "eq";
  cfg.bounds.delta_mut = {0};
  cfg.bounds.delta_rep_mut = {1};
  cfg.thresholds.min_window_len = 1;
  return cfg;
}

// A randomly wired relation instance over a small trace: recognition is a
// random partial injective matching between consecutive states, causal
// events avoid recognized children, and the bounded-difference relation is
// an arbitrary materialized subset of forward pairs. Everything the fast
// path and the definitional oracle need, with the trace kept alive.
struct AncestryCase {
  alife::Trace trace;
  std::unique_ptr<alife::TraceIndex> idx;
  alife::RecognitionMap rec;
  alife::CausalRelation causal;
  alife::DeltaRelation delta;
};

inline AncestryCase random_ancestry_case(alife::Rng& rng) {
  AncestryCase out;
  const std::uint32_t n_states = 2 + static_cast<std::uint32_t>(rng.below(5));

  TraceBuilder builder("synth", trait_schema());
  std::vector<std::uint32_t> state_sizes;
  for (std::uint32_t s = 0; s < n_states; ++s) {
    const std::uint32_t count = static_cast<std::uint32_t>(rng.below(9));
    state_sizes.push_back(count);
    for (std::uint32_t e = 0; e < count; ++e) {
      builder.entity(s, "e" + std::to_string(e),
                     {static_cast<std::int64_t>(rng.below(4))});
    }
    if (count == 0) builder.entity(s, "placeholder", {std::int64_t{0}});
  }
  out.trace = builder.build();
  out.idx = std::make_unique<alife::TraceIndex>(out.trace);
  const alife::TraceIndex& idx = *out.idx;

  // Recognition: per state pair, a random partial matching.
  for (std::uint32_t s = 0; s + 1 < n_states; ++s) {
    auto [b0, e0] = idx.ranges[s];
    auto [b1, e1] = idx.ranges[s + 1];
    std::vector<std::uint32_t> sources, targets;
    for (std::uint32_t i = b0; i < e0; ++i) sources.push_back(i);
    for (std::uint32_t j = b1; j < e1; ++j) targets.push_back(j);
    for (std::size_t i = sources.size(); i > 1; --i) {
      std::swap(sources[i - 1], sources[rng.below(i)]);
    }
    for (std::size_t j = targets.size(); j > 1; --j) {
      std::swap(targets[j - 1], targets[rng.below(j)]);
    }
    const std::size_t pairs = std::min(sources.size(), targets.size());
    for (std::size_t k = 0; k < pairs; ++k) {
      if (rng.chance(0.6)) out.rec.add(sources[k], targets[k]);
    }
  }

  // Causal events: forward one-step pairs whose child is not recognized.
  for (std::uint32_t s = 0; s + 1 < n_states; ++s) {
    auto [b0, e0] = idx.ranges[s];
    auto [b1, e1] = idx.ranges[s + 1];
    for (std::uint32_t a = b0; a < e0; ++a) {
      for (std::uint32_t b = b1; b < e1; ++b) {
        if (out.rec.is_target(b)) continue;
        if (rng.chance(0.3)) out.causal.retained.add(a, b);
      }
    }
  }
  out.causal.retained.finalize();

  // Bounded-difference relation: random forward pairs, biased to keep a
  // good share of the step edges so closures have depth.
  std::vector<alife::Edge> delta_edges;
  const std::uint32_t n = static_cast<std::uint32_t>(idx.size());
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = a + 1; b < n; ++b) {
      if (idx.state_index(a) >= idx.state_index(b)) continue;
      const bool is_step = out.rec.is_edge(a, b) ||
                           out.causal.retained.contains(a, b);
      if (rng.chance(is_step ? 0.7 : 0.35)) delta_edges.emplace_back(a, b);
    }
  }
  out.delta = alife::delta_from_edges(std::move(delta_edges));
  return out;
}

}  // namespace testutil
