#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "alife/lambda.hpp"
#include "alife/relations.hpp"
#include "alife/trace.hpp"

namespace alife {

struct AlchemyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Lambda-term reaction soup: each collision applies one term to another and
// beta-reduces the application under resource limits.
struct AlchemyConfig {
  std::uint32_t population = 20;   // soup size for random init; a list sets it
  std::uint32_t max_steps = 100;   // beta-step budget per collision
  std::uint32_t max_size = 1000;   // term-size budget during reduction
  std::uint32_t collisions = 100;  // run length: one observed step each
  // "list:t1,t2,..." (terms in the grammar, comma-separated) or
  // "random:depth=N[,var=W,abs=W,app=W]".
  std::string init = "random:depth=6";
  std::uint64_t seed = 1;
};

AlchemyConfig alchemy_config_from_kv(
    const std::map<std::string, std::string>& kv);
AlchemyConfig alchemy_config_from_file(const std::string& path);

// Initial soup terms for a config (parsed list, or seeded generation).
std::vector<TermPtr> alchemy_initial_terms(const AlchemyConfig& cfg);

// Two dimensions: canonical term string and the size,lex,mul tag string.
CharSpaceSchema alchemy_schema();

// Runs the collision loop and observes state 0 (initial soup) plus one state
// per collision. Each entity carries tag (size, lex, mul) — size of the term,
// stable lexicographic rank within its size class, copy/age counter — and
// chars (canonical term, "size,lex,mul"). Tag triples are unique per state;
// local ids are the tag strings. A collision picks an ordered pair of
// distinct instances, reduces the application, and on success adds the
// product (mul = 1), removes one uniformly random non-reactant non-product
// entity when one exists, and records the two causal events; an exhausted
// reduction is elastic (tags tick, nothing else changes).
Trace alchemy_run(const AlchemyConfig& cfg);

struct Level0Report {
  // Alpha-class keys (canonical term strings), sorted.
  std::vector<std::string> self_copiers;
  // Mutually-producing class groups; each group sorted, groups sorted.
  std::vector<std::vector<std::string>> hypercycles;
};

// Level-0 organization scan over a finished trace.
//   self_copiers: classes with a retained causal event whose reactant and
//   product fall in the same class, plus fixpoint classes — two alpha-equal
//   reactants whose product is the self-application of the reactant.
//   hypercycles: strongly connected components (size >= 2) of the
//   class-level production digraph (reactant class -> product class),
//   restricted to classes holding an AncestorOf pair of their own instances.
Level0Report detect_level0(const Trace& trace, const RelationBundle& bundle);

}  // namespace alife
