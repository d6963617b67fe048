#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"

#include "alife/alchemy.hpp"
#include "alife/config.hpp"
#include "alife/lambda.hpp"
#include "alife/relations.hpp"
#include "alife/synth.hpp"
#include "alife/trace_io.hpp"

using namespace alife;

namespace {

AlchemyConfig ab_soup(std::uint64_t seed, std::uint32_t collisions) {
  AlchemyConfig cfg;
  cfg.init = "list:\\x1.\\x2.x2,\\x1.\\x2.x2,\\x.x,\\x.x";
  cfg.population = 4;
  cfg.seed = seed;
  cfg.collisions = collisions;
  return cfg;
}

RelationBundle bundle_for(const Trace& t) {
  return RelationBundle(t, default_observer("alchemy", alchemy_schema()));
}

}  // namespace

TEST_CASE("alchemy_schema has term and tag string dimensions") {
  const CharSpaceSchema s = alchemy_schema();
  REQUIRE(s.arity() == 2);
  CHECK(s.dims[0].name == "term");
  CHECK(s.dims[1].name == "tag");
  for (const DimSpec& d : s.dims) {
    CHECK(d.kind == DimKind::Str);
    CHECK_FALSE(d.char_ordered);
    CHECK(d.diff_ordered);
  }
}

TEST_CASE("alchemy_config_from_kv validates keys and init specs") {
  const AlchemyConfig cfg = alchemy_config_from_kv(
      {{"population", "8"}, {"max_steps", "50"}, {"max_size", "400"},
       {"collisions", "30"}, {"init", "random:depth=4,var=3,abs=2,app=1"},
       {"seed", "9"}});
  CHECK(cfg.population == 8);
  CHECK(cfg.max_steps == 50);
  CHECK(cfg.max_size == 400);
  CHECK(cfg.collisions == 30);
  CHECK(cfg.seed == 9);

  // A list init pins the population to the list length.
  CHECK(alchemy_config_from_kv({{"init", "list:\\x.x,\\y.y,\\z.z"}})
            .population == 3);

  CHECK_THROWS_WITH_AS(alchemy_config_from_kv({{"speed", "1"}}),
                       "unknown alchemy config key: speed", AlchemyError);
  CHECK_THROWS_WITH_AS(alchemy_config_from_kv({{"max_steps", "0"}}),
                       "max_steps must be >= 1", AlchemyError);
  CHECK_THROWS_WITH_AS(alchemy_config_from_kv({{"max_size", "0"}}),
                       "max_size must be >= 1", AlchemyError);
  CHECK_THROWS_WITH_AS(alchemy_config_from_kv({{"init", "list:\\x.x"}}),
                       "init list needs >= 2 terms", AlchemyError);
  CHECK_THROWS_WITH_AS(alchemy_config_from_kv({{"init", "soup:hot"}}),
                       "init must start with list: or random:", AlchemyError);
  CHECK_THROWS_WITH_AS(alchemy_config_from_kv({{"init", "random:var=1"}}),
                       "random init requires depth=N", AlchemyError);
  CHECK_THROWS_WITH_AS(
      alchemy_config_from_kv({{"init", "random:depth=3,zap=1"}}),
      "unknown random init param: zap", AlchemyError);
  CHECK_THROWS_WITH_AS(
      alchemy_config_from_kv({{"population", "1"}, {"init", "random:depth=2"}}),
      "population must be >= 2", AlchemyError);
}

TEST_CASE("alchemy_initial_terms rejects open terms, generates closed ones") {
  AlchemyConfig open;
  open.init = "list:\\x.y,\\x.x";
  CHECK_THROWS_WITH_AS(alchemy_initial_terms(open),
                       "init term has free variables: \\x.y", AlchemyError);

  AlchemyConfig rnd;
  rnd.init = "random:depth=4";
  rnd.population = 6;
  rnd.seed = 13;
  const std::vector<TermPtr> a = alchemy_initial_terms(rnd);
  const std::vector<TermPtr> b = alchemy_initial_terms(rnd);
  REQUIRE(a.size() == 6);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(free_vars(a[i]).empty());
    CHECK(print_term(a[i]) == print_term(b[i]));
  }
}

TEST_CASE("initial soup tags are size,lex,mul with per-copy multiplicity") {
  const Trace t = alchemy_run(ab_soup(1, 0));
  REQUIRE(t.states.size() == 1);
  const State& st = t.states[0];
  REQUIRE(st.entities.size() == 4);
  CHECK(st.entities[0].ref.local_id == "5,1,1");
  CHECK(st.entities[1].ref.local_id == "5,1,2");
  CHECK(st.entities[2].ref.local_id == "3,1,1");
  CHECK(st.entities[3].ref.local_id == "3,1,2");
  CHECK(char_value_to_string(st.entities[0].chars[0]) == "\\x1.\\x2.x2");
  CHECK(char_value_to_string(st.entities[2].chars[0]) == "\\x1.x1");
  CHECK(st.entities[1].tag ==
        Tag{std::int64_t{5}, std::int64_t{1}, std::int64_t{2}});
}

TEST_CASE("a reactive collision adds the product and records both parents") {
  AlchemyConfig cfg;
  cfg.init = "list:\\x.x,\\x.x";
  cfg.population = 2;
  cfg.collisions = 1;
  cfg.seed = 4;
  const Trace t = alchemy_run(cfg);
  REQUIRE(t.states.size() == 2);
  CHECK(validate_trace(t).ok());

  // Two-entity soups have no removal candidate, so the soup grows.
  const State& st = t.states[1];
  REQUIRE(st.entities.size() == 3);
  std::set<std::string> ids;
  for (const auto& e : st.entities) ids.insert(e.ref.local_id);
  // Survivors ticked to mul 2 and 3; the product enters at mul 1.
  CHECK(ids == std::set<std::string>{"3,1,1", "3,1,2", "3,1,3"});

  REQUIRE(st.causes.size() == 2);
  std::set<std::string> parents;
  for (const CausalEvent& ev : st.causes) {
    CHECK(ev.child == EntityRef{1, "3,1,1"});
    CHECK(ev.parent.state_index == 0);
    parents.insert(ev.parent.local_id);
  }
  CHECK(parents == std::set<std::string>{"3,1,1", "3,1,2"});

  // Identity applied to identity copies it: a same-class causal edge.
  const RelationBundle bundle = bundle_for(t);
  const Level0Report report = detect_level0(t, bundle);
  CHECK(std::count(report.self_copiers.begin(), report.self_copiers.end(),
                   "\\x1.x1") == 1);
}

TEST_CASE("an exhausted collision is elastic: tags tick, nothing else") {
  AlchemyConfig cfg;
  cfg.init = "list:(\\x.(x)(x))(\\x.(x)(x)),(\\x.(x)(x))(\\x.(x)(x))";
  cfg.population = 2;
  cfg.collisions = 3;
  cfg.max_size = 10;  // the application already exceeds this
  cfg.seed = 2;
  const Trace t = alchemy_run(cfg);
  REQUIRE(t.states.size() == 4);
  CHECK(validate_trace(t).ok());
  for (std::uint32_t s = 0; s <= 3; ++s) {
    const State& st = t.states[s];
    CHECK(st.causes.empty());
    REQUIRE(st.entities.size() == 2);
    CHECK(st.entities[0].ref.local_id ==
          "8,1," + std::to_string(1 + s));
    CHECK(st.entities[1].ref.local_id ==
          "8,1," + std::to_string(2 + s));
  }

  // No causal event at all: no organization to detect.
  const RelationBundle bundle = bundle_for(t);
  const Level0Report report = detect_level0(t, bundle);
  CHECK(report.self_copiers.empty());
  CHECK(report.hypercycles.empty());
}

TEST_CASE("a fixpoint collision marks its class as self-copying") {
  AlchemyConfig cfg;
  cfg.init = "list:\\x.(x)(x),\\x.(x)(x)";
  cfg.population = 2;
  cfg.collisions = 5;
  cfg.seed = 3;
  const Trace t = alchemy_run(cfg);
  const RelationBundle bundle = bundle_for(t);
  const Level0Report report = detect_level0(t, bundle);
  CHECK(std::count(report.self_copiers.begin(), report.self_copiers.end(),
                   "\\x1.(x1)(x1)") == 1);
}

TEST_CASE("the two-term soup closes into a hypercycle") {
  const Trace t = alchemy_run(ab_soup(7, 100));
  CHECK(validate_trace(t).ok());
  const RelationBundle bundle = bundle_for(t);
  CHECK(bundle.causal.dropped.empty());

  const Level0Report report = detect_level0(t, bundle);
  const std::vector<std::string> expected = {"\\x1.\\x2.x2", "\\x1.x1"};
  CHECK(std::count(report.hypercycles.begin(), report.hypercycles.end(),
                   expected) == 1);
}

TEST_CASE("detect_level0 refuses non-alchemy traces") {
  PlantedPlan plan;
  plan.mode = "sizes";
  plan.gen_sizes = {2, 2};
  const Trace t = synth_trace(plan, 1);
  const RelationBundle bundle(t, default_observer("synth", synth_schema()));
  CHECK_THROWS_WITH_AS(detect_level0(t, bundle),
                       "level-0 detection runs on alchemy traces only",
                       AlchemyError);
}

TEST_CASE("alchemy runs are deterministic per seed") {
  const std::string a = trace_to_string(alchemy_run(ab_soup(7, 40)));
  const std::string b = trace_to_string(alchemy_run(ab_soup(7, 40)));
  CHECK(a == b);
  CHECK(a != trace_to_string(alchemy_run(ab_soup(8, 40))));
}
