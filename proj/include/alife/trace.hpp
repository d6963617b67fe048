#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "alife/chars.hpp"

namespace alife {

// Identifies one entity instance in one state. Identity across states is
// never expressed by reusing a ref; only a recognition edge can assert it.
struct EntityRef {
  std::uint32_t state_index = 0;
  std::string local_id;

  friend bool operator==(const EntityRef&, const EntityRef&) = default;
  friend auto operator<=>(const EntityRef&, const EntityRef&) = default;
};

std::string to_string(const EntityRef& r);

// Model-defined tuple of scalar components.
using Tag = std::vector<CharValue>;

std::string tag_to_string(const Tag& t);

struct EntitySnapshot {
  EntityRef ref;
  Tag tag;
  CharVector chars;

  friend bool operator==(const EntitySnapshot&, const EntitySnapshot&) =
      default;
};

// A causal event recorded by the model: parent in state k, child in k+1.
struct CausalEvent {
  EntityRef parent;
  EntityRef child;

  friend bool operator==(const CausalEvent&, const CausalEvent&) = default;
  friend auto operator<=>(const CausalEvent&, const CausalEvent&) = default;
};

struct State {
  std::uint32_t index = 0;
  std::vector<EntitySnapshot> entities;
  // Events whose child lives in this state (parents in index-1).
  std::vector<CausalEvent> causes;

  friend bool operator==(const State&, const State&) = default;
};

struct TraceMeta {
  int format_version = 1;
  std::string model;
  std::uint64_t seed = 0;
  std::string config_digest;

  friend bool operator==(const TraceMeta&, const TraceMeta&) = default;
};

struct Trace {
  TraceMeta meta;
  CharSpaceSchema schema;
  std::vector<State> states;

  const EntitySnapshot* find(const EntityRef& r) const;

  friend bool operator==(const Trace&, const Trace&) = default;
};

struct ValidationIssue {
  std::string kind;  // duplicate-tag | bad-index | bad-ref | arity | event
  std::uint32_t state_index = 0;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

// Structural scan: per-state tag uniqueness, consecutive state indices,
// ref/state agreement, char arity vs schema, causal events spanning exactly
// one step with both endpoints present.
ValidationReport validate_trace(const Trace& trace);

}  // namespace alife
