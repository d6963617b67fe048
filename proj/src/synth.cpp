#include "alife/synth.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "alife/config.hpp"
#include "alife/rng.hpp"

namespace alife {

CharSpaceSchema synth_schema() {
  CharSpaceSchema s;
  s.dims.push_back({"trait", DimKind::Int, /*char_ordered=*/true,
                    /*diff_ordered=*/true});
  return s;
}

PlantedPlan plan_from_kv(const std::map<std::string, std::string>& kv) {
  PlantedPlan plan;
  for (const auto& [key, val] : kv) {
    if (key == "mode") {
      plan.mode = val;
    } else if (key == "steps") {
      plan.steps = static_cast<std::uint32_t>(parse_int(val, key));
    } else if (key == "values") {
      plan.values = parse_diff_list(val, key);
    } else if (key == "rates") {
      plan.rates = parse_diff_list(val, key);
    } else if (key == "assignment") {
      plan.assignment = val;
    } else if (key == "founder_value") {
      plan.founder_value = parse_int(val, key);
    } else if (key == "gen_sizes") {
      plan.gen_sizes = parse_diff_list(val, key);
    } else {
      throw PlanError("unknown plan key: " + key);
    }
  }
  return plan;
}

PlantedPlan plan_from_file(const std::string& path) {
  return plan_from_kv(parse_kv_file(path));
}

namespace {

struct Chain {
  std::int64_t id = 0;
  std::uint32_t born = 0;
  std::int64_t trait = 0;
  std::int64_t parent = -1;  // chain id, -1 for founders
};

void check_rates_plan(const PlantedPlan& plan) {
  if (plan.values.empty()) throw PlanError("rates plan needs values");
  if (plan.rates.empty()) throw PlanError("rates plan needs rates");
  if (plan.assignment == "by_value" &&
      plan.values.size() != plan.rates.size()) {
    throw PlanError("values and rates must have equal length");
  }
  if (plan.assignment != "by_value" && plan.assignment != "shuffled") {
    throw PlanError("unknown assignment: " + plan.assignment);
  }
  std::set<std::int64_t> distinct(plan.values.begin(), plan.values.end());
  if (distinct.size() != plan.values.size()) {
    throw PlanError("planted trait values must be distinct");
  }
  if (distinct.count(plan.founder_value)) {
    throw PlanError("founder_value must differ from planted values");
  }
  for (std::int64_t r : plan.rates) {
    if (r < 0) throw PlanError("rates must be non-negative");
  }
}

Trace assemble(const PlantedPlan& plan, std::uint64_t seed,
               const std::vector<Chain>& chains,
               const std::uint32_t horizon) {
  std::uint32_t steps = plan.steps == 0 ? horizon : plan.steps;
  if (steps < horizon) {
    std::ostringstream os;
    os << "steps = " << steps << " too small; plan needs " << horizon;
    throw PlanError(os.str());
  }
  Trace t;
  t.meta.model = "synth";
  t.meta.seed = seed;
  {
    std::ostringstream os;
    os << "mode=" << plan.mode << ";steps=" << steps << ";values=";
    for (auto v : plan.values) os << v << ',';
    os << ";rates=";
    for (auto v : plan.rates) os << v << ',';
    os << ";assignment=" << plan.assignment
       << ";founder=" << plan.founder_value << ";gens=";
    for (auto v : plan.gen_sizes) os << v << ',';
    os << ";seed=" << seed;
    t.meta.config_digest = hex64(fnv1a64(os.str()));
  }
  t.schema = synth_schema();
  t.states.resize(steps + 1);
  for (std::uint32_t s = 0; s <= steps; ++s) {
    State& st = t.states[s];
    st.index = s;
    for (const Chain& c : chains) {
      if (c.born > s) continue;
      EntitySnapshot e;
      e.ref = {s, std::to_string(c.id)};
      e.tag = {c.id};
      e.chars = {c.trait};
      st.entities.push_back(std::move(e));
      if (c.born == s && c.parent >= 0) {
        CausalEvent ev;
        ev.parent = {s - 1, std::to_string(c.parent)};
        ev.child = {s, std::to_string(c.id)};
        st.causes.push_back(std::move(ev));
      }
    }
  }
  return t;
}

Trace build_rates(const PlantedPlan& plan, std::uint64_t seed) {
  check_rates_plan(plan);
  Rng rng(seed);
  const std::size_t k = plan.values.size();
  std::vector<std::int64_t> rate_of(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    rate_of[i] = plan.assignment == "by_value"
                     ? plan.rates[i]
                     : plan.rates[rng.below(plan.rates.size())];
  }
  std::vector<Chain> chains;
  chains.push_back({0, 0, plan.founder_value, -1});
  std::uint32_t horizon = 1;
  std::int64_t next_id = 1;
  for (std::size_t i = 0; i < k; ++i) {
    // Child chain for value i is born from the founder at state i+1.
    const std::uint32_t born = static_cast<std::uint32_t>(i + 1);
    const std::int64_t child_id = next_id++;
    chains.push_back({child_id, born, plan.values[i], 0});
    horizon = std::max(horizon, born);
    // Its own children arrive one per state right after its birth.
    for (std::int64_t j = 0; j < rate_of[i]; ++j) {
      const std::uint32_t gborn =
          born + 1 + static_cast<std::uint32_t>(j);
      chains.push_back({next_id++, gborn, plan.values[i], child_id});
      horizon = std::max(horizon, gborn);
    }
  }
  return assemble(plan, seed, chains, horizon);
}

Trace build_sizes(const PlantedPlan& plan, std::uint64_t seed) {
  if (plan.gen_sizes.empty()) throw PlanError("sizes plan needs gen_sizes");
  for (std::int64_t g : plan.gen_sizes) {
    if (g <= 0) throw PlanError("gen_sizes entries must be positive");
  }
  std::vector<Chain> chains;
  std::int64_t next_id = 0;
  std::vector<std::int64_t> prev;
  std::uint32_t horizon = 0;
  for (std::size_t g = 0; g < plan.gen_sizes.size(); ++g) {
    std::vector<std::int64_t> cur;
    const std::uint32_t born = static_cast<std::uint32_t>(g);
    for (std::int64_t j = 0; j < plan.gen_sizes[g]; ++j) {
      const std::int64_t parent =
          g == 0 ? -1 : prev[static_cast<std::size_t>(j) % prev.size()];
      chains.push_back({next_id, born, 0, parent});
      cur.push_back(next_id);
      ++next_id;
    }
    horizon = std::max(horizon, born);
    prev = std::move(cur);
  }
  return assemble(plan, seed, chains, horizon);
}

}  // namespace

Trace synth_trace(const PlantedPlan& plan, std::uint64_t seed) {
  if (plan.mode == "rates") return build_rates(plan, seed);
  if (plan.mode == "sizes") return build_sizes(plan, seed);
  throw PlanError("unknown plan mode: " + plan.mode);
}

}  // namespace alife
