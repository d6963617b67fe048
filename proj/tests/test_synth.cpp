#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"

#include "alife/axioms.hpp"
#include "alife/config.hpp"
#include "alife/relations.hpp"
#include "alife/synth.hpp"
#include "alife/trace_io.hpp"

using namespace alife;

namespace {

ObserverConfig synth_observer() {
  ObserverConfig cfg = default_observer("synth", synth_schema());
  cfg.thresholds.min_window_len = 1;
  return cfg;
}

PlantedPlan rates_plan(std::vector<std::int64_t> values,
                       std::vector<std::int64_t> rates) {
  PlantedPlan plan;
  plan.mode = "rates";
  plan.values = std::move(values);
  plan.rates = std::move(rates);
  return plan;
}

}  // namespace

TEST_CASE("synth_schema carries one ordered integer dimension") {
  const CharSpaceSchema s = synth_schema();
  REQUIRE(s.arity() == 1);
  CHECK(s.dims[0].name == "trait");
  CHECK(s.dims[0].kind == DimKind::Int);
  CHECK(s.dims[0].char_ordered);
  CHECK(s.dims[0].diff_ordered);
  CHECK(s.dim_index("trait") == 0);
  CHECK(s.dim_index("absent") == -1);
}

TEST_CASE("plan validation rejects malformed plans") {
  CHECK_THROWS_WITH_AS(synth_trace(PlantedPlan{.mode = "chaos"}, 1),
                       "unknown plan mode: chaos", PlanError);

  PlantedPlan p;
  p.mode = "rates";
  CHECK_THROWS_WITH_AS(synth_trace(p, 1), "rates plan needs values",
                       PlanError);
  p.values = {1, 2};
  CHECK_THROWS_WITH_AS(synth_trace(p, 1), "rates plan needs rates", PlanError);
  p.rates = {3};
  CHECK_THROWS_WITH_AS(synth_trace(p, 1),
                       "values and rates must have equal length", PlanError);
  p.rates = {3, 4};
  p.assignment = "sideways";
  CHECK_THROWS_WITH_AS(synth_trace(p, 1), "unknown assignment: sideways",
                       PlanError);
  p.assignment = "by_value";
  p.values = {2, 2};
  CHECK_THROWS_WITH_AS(synth_trace(p, 1),
                       "planted trait values must be distinct", PlanError);
  p.values = {0, 2};
  CHECK_THROWS_WITH_AS(synth_trace(p, 1),
                       "founder_value must differ from planted values",
                       PlanError);
  p.values = {1, 2};
  p.rates = {3, -1};
  CHECK_THROWS_WITH_AS(synth_trace(p, 1), "rates must be non-negative",
                       PlanError);

  PlantedPlan s;
  s.mode = "sizes";
  CHECK_THROWS_WITH_AS(synth_trace(s, 1), "sizes plan needs gen_sizes",
                       PlanError);
  s.gen_sizes = {2, 0};
  CHECK_THROWS_WITH_AS(synth_trace(s, 1), "gen_sizes entries must be positive",
                       PlanError);

  PlantedPlan tight = rates_plan({7}, {2});
  tight.steps = 2;  // child born at 1, grandchildren need states 2 and 3
  CHECK_THROWS_WITH_AS(synth_trace(tight, 1), "steps = 2 too small; plan needs 3",
                       PlanError);
}

TEST_CASE("plan_from_kv parses every key and rejects unknown ones") {
  const std::map<std::string, std::string> kv = {
      {"mode", "rates"},          {"steps", "40"},
      {"values", "1,2,3"},        {"rates", "5,6,7"},
      {"assignment", "shuffled"}, {"founder_value", "9"},
      {"gen_sizes", "2,4"}};
  const PlantedPlan plan = plan_from_kv(kv);
  CHECK(plan.mode == "rates");
  CHECK(plan.steps == 40);
  CHECK(plan.values == std::vector<std::int64_t>{1, 2, 3});
  CHECK(plan.rates == std::vector<std::int64_t>{5, 6, 7});
  CHECK(plan.assignment == "shuffled");
  CHECK(plan.founder_value == 9);
  CHECK(plan.gen_sizes == std::vector<std::int64_t>{2, 4});

  CHECK_THROWS_WITH_AS(plan_from_kv({{"speed", "11"}}),
                       "unknown plan key: speed", PlanError);
}

TEST_CASE("rates mode plants recoverable variants and rates") {
  const std::vector<std::int64_t> values = {3, 8, 15, 4};
  const std::vector<std::int64_t> rates = {2, 0, 5, 1};
  const Trace t = synth_trace(rates_plan(values, rates), 9);
  CHECK(validate_trace(t).ok());

  const ObserverConfig cfg = synth_observer();
  const RelationBundle bundle(t, cfg);
  CHECK(bundle.recognition_verdicts.step_forward.status == Status::Satisfied);
  CHECK(bundle.causal.dropped.empty());

  const AnalysisWindow w = cfg.effective_window(t);
  const VariationResult var =
      heritable_variation(bundle.idx, bundle.graph, cfg, w);

  // The distinct mutant variants are exactly the planted values, and each
  // variant's reproduction rate is its planted rate.
  std::map<std::int64_t, std::int64_t> recovered;
  for (std::uint32_t id : var.var_child_mut) {
    const std::int64_t trait =
        std::get<std::int64_t>(bundle.idx.snap(id).chars[0]);
    recovered[trait] =
        rate_rep(bundle.idx, bundle.graph, bundle.recognition, cfg, id);
  }
  REQUIRE(recovered.size() == values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    REQUIRE(recovered.count(values[i]) == 1);
    CHECK(recovered[values[i]] == rates[i]);
  }
}

TEST_CASE("shuffled assignment draws rates from the planted list") {
  PlantedPlan plan = rates_plan({1, 2, 3, 4, 5}, {10, 20, 30});
  plan.assignment = "shuffled";
  const Trace t = synth_trace(plan, 21);

  const ObserverConfig cfg = synth_observer();
  const RelationBundle bundle(t, cfg);
  const VariationResult var = heritable_variation(bundle.idx, bundle.graph,
                                                  cfg, cfg.effective_window(t));
  REQUIRE(var.var_child_mut.size() == 5);
  const std::set<std::int64_t> pool = {10, 20, 30};
  for (std::uint32_t id : var.var_child_mut) {
    const std::int64_t r =
        rate_rep(bundle.idx, bundle.graph, bundle.recognition, cfg, id);
    CHECK(pool.count(r) == 1);
  }
}

TEST_CASE("explicit steps extend the trace past the minimal horizon") {
  PlantedPlan plan = rates_plan({7}, {1});
  plan.steps = 10;
  const Trace t = synth_trace(plan, 1);
  REQUIRE(t.states.size() == 11);
  // Every chain persists to the final state.
  CHECK(t.states[10].entities.size() == 3);
  CHECK(validate_trace(t).ok());
}

TEST_CASE("sizes mode reproduces the planted generation partition") {
  PlantedPlan plan;
  plan.mode = "sizes";
  plan.gen_sizes = {8, 4, 2, 1};
  const Trace t = synth_trace(plan, 2);
  CHECK(validate_trace(t).ok());

  const ObserverConfig cfg = synth_observer();
  const RelationBundle bundle(t, cfg);
  const ChainIndex chains = build_chains(bundle.idx, bundle.recognition);
  std::vector<EntityRef> founders;
  for (const auto& e : t.states[0].entities) founders.push_back(e.ref);
  const GenerationPartition part =
      generations(bundle.idx, bundle.graph, chains, founders);
  REQUIRE(part.generations.size() == 4);
  CHECK(part.generations[0].size() == 8);
  CHECK(part.generations[1].size() == 4);
  CHECK(part.generations[2].size() == 2);
  CHECK(part.generations[3].size() == 1);

  // A strictly shrinking population is the canonical fecundity failure.
  SelectionThresholds th;
  const Verdict v = check_fecundity(part, th);
  CHECK(v.status == Status::Violated);
}

TEST_CASE("synth traces are deterministic per plan and seed") {
  PlantedPlan plan = rates_plan({1, 2, 3, 4}, {5, 1, 3, 2});
  plan.assignment = "shuffled";
  const std::string a = trace_to_string(synth_trace(plan, 77));
  const std::string b = trace_to_string(synth_trace(plan, 77));
  CHECK(a == b);
  const std::string c = trace_to_string(synth_trace(plan, 78));
  CHECK(a != c);
}
