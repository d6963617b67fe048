#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"

#include "alife/cbs.hpp"
#include "alife/config.hpp"
#include "alife/trace_io.hpp"

using namespace alife;

TEST_CASE("cbs_schema names one ordered binary dimension per position") {
  const CharSpaceSchema s = cbs_schema(3);
  REQUIRE(s.arity() == 3);
  CHECK(s.dims[0].name == "b1");
  CHECK(s.dims[2].name == "b3");
  for (const DimSpec& d : s.dims) {
    CHECK(d.kind == DimKind::Int);
    CHECK(d.char_ordered);
    CHECK(d.diff_ordered);
  }
}

TEST_CASE("effective_mask resolves, sorts, dedupes and validates") {
  CbsConfig cfg;
  cfg.n = 7;
  CHECK(cfg.effective_mask() == std::vector<std::size_t>{2, 4, 6});

  cfg.mask = {5, 1, 3, 3, 1};
  CHECK(cfg.effective_mask() == std::vector<std::size_t>{1, 3, 5});

  cfg.mask = {9};
  CHECK_THROWS_WITH_AS(cfg.effective_mask(), "mask position 9 outside 1..7",
                       CbsError);
}

TEST_CASE("cbs_config_from_kv parses keys and rejects bad values") {
  const std::map<std::string, std::string> kv = {
      {"n", "4"},           {"population", "9"},  {"copy_count", "2"},
      {"error_prob", "0.25"}, {"error_mask", "1,3"}, {"policy", "grow"},
      {"seed", "42"},       {"steps", "12"},      {"init", "0000,1111"}};
  const CbsConfig cfg = cbs_config_from_kv(kv);
  CHECK(cfg.n == 4);
  CHECK(cfg.population == 9);
  CHECK(cfg.copy_count == 2);
  CHECK(cfg.error_prob == doctest::Approx(0.25));
  CHECK(cfg.mask == std::vector<std::size_t>{1, 3});
  CHECK(cfg.policy == "grow");
  CHECK(cfg.seed == 42);
  CHECK(cfg.steps == 12);
  CHECK(cfg.init == std::vector<std::string>{"0000", "1111"});

  // "even" restores the default mask.
  const CbsConfig even = cbs_config_from_kv({{"error_mask", "even"}});
  CHECK(even.mask.empty());

  CHECK_THROWS_WITH_AS(cbs_config_from_kv({{"flavor", "x"}}),
                       "unknown cbs config key: flavor", CbsError);
  CHECK_THROWS_WITH_AS(cbs_config_from_kv({{"n", "0"}}), "n must be >= 1",
                       CbsError);
  CHECK_THROWS_WITH_AS(cbs_config_from_kv({{"error_prob", "1.5"}}),
                       "error_prob must lie in [0,1]", CbsError);
  CHECK_THROWS_WITH_AS(cbs_config_from_kv({{"policy", "decay"}}),
                       "unknown policy: decay", CbsError);
  CHECK_THROWS_WITH_AS(cbs_config_from_kv({{"n", "3"}, {"init", "01"}}),
                       "init string '01' is not length 3", CbsError);
  CHECK_THROWS_WITH_AS(cbs_config_from_kv({{"n", "3"}, {"init", "0a1"}}),
                       "init string '0a1' is not binary", CbsError);
  CHECK_THROWS_WITH_AS(cbs_config_from_kv({{"n", "3"}, {"error_mask", "0"}}),
                       "error_mask positions are 1-based", CbsError);
  CHECK_THROWS_WITH_AS(cbs_config_from_kv({{"n", "3"}, {"error_mask", "4"}}),
                       "mask position 4 outside 1..3", CbsError);
}

TEST_CASE("explicit init strings become tags 1..k in order") {
  CbsConfig cfg;
  cfg.n = 3;
  cfg.init = {"010", "111"};
  cfg.steps = 0;
  const Trace t = cbs_run(cfg);
  REQUIRE(t.states.size() == 1);
  REQUIRE(t.states[0].entities.size() == 2);
  CHECK(t.states[0].entities[0].ref.local_id == "1");
  CHECK(t.states[0].entities[0].chars ==
        CharVector{std::int64_t{0}, std::int64_t{1}, std::int64_t{0}});
  CHECK(t.states[0].entities[1].ref.local_id == "2");
  CHECK(t.states[0].entities[1].chars ==
        CharVector{std::int64_t{1}, std::int64_t{1}, std::int64_t{1}});
}

TEST_CASE("copy errors never touch positions outside the mask") {
  CbsConfig cfg;
  cfg.n = 6;
  cfg.population = 8;
  cfg.copy_count = 4;
  cfg.error_prob = 1.0;  // every masked position flips on every copy
  cfg.steps = 15;
  cfg.seed = 5;
  const Trace t = cbs_run(cfg);
  CHECK(validate_trace(t).ok());

  std::size_t checked = 0;
  for (std::size_t s = 1; s < t.states.size(); ++s) {
    for (const CausalEvent& ev : t.states[s].causes) {
      const EntitySnapshot* parent = t.find(ev.parent);
      const EntitySnapshot* child = t.find(ev.child);
      REQUIRE(parent != nullptr);
      REQUIRE(child != nullptr);
      for (std::size_t d = 0; d < 6; ++d) {
        const bool masked = (d % 2) == 1;  // b2, b4, b6
        const bool same =
            char_value_eq(parent->chars[d], child->chars[d]);
        CHECK(same == !masked);
      }
      ++checked;
    }
  }
  CHECK(checked == 15 * 4);
}

TEST_CASE("constant policy holds the population size") {
  CbsConfig cfg;
  cfg.n = 4;
  cfg.population = 10;
  cfg.copy_count = 3;
  cfg.error_prob = 0.1;
  cfg.steps = 20;
  cfg.seed = 3;
  const Trace t = cbs_run(cfg);
  for (const State& st : t.states) {
    CHECK(st.entities.size() == 10);
  }
}

TEST_CASE("grow policy adds copy_count entities per step") {
  CbsConfig cfg;
  cfg.n = 4;
  cfg.population = 6;
  cfg.copy_count = 2;
  cfg.policy = "grow";
  cfg.steps = 10;
  cfg.seed = 3;
  const Trace t = cbs_run(cfg);
  for (std::size_t s = 0; s < t.states.size(); ++s) {
    CHECK(t.states[s].entities.size() == 6 + 2 * s);
  }
  CHECK(validate_trace(t).ok());
}

TEST_CASE("cbs_observer narrows the reproduction bound to the mask") {
  CbsConfig cfg;
  cfg.n = 5;
  const ObserverConfig obs = cbs_observer(cfg);
  CHECK(obs.recognizer == "tag");
  CHECK(obs.measure == "xor");
  CHECK(obs.bounds.delta_mut == DiffVector(5, 0));
  CHECK(obs.bounds.delta_rep_mut == DiffVector{0, 1, 0, 1, 0});
}

TEST_CASE("cbs runs are deterministic per seed") {
  CbsConfig cfg;
  cfg.n = 8;
  cfg.population = 12;
  cfg.copy_count = 4;
  cfg.error_prob = 0.2;
  cfg.steps = 30;
  cfg.seed = 11;
  const std::string a = trace_to_string(cbs_run(cfg));
  const std::string b = trace_to_string(cbs_run(cfg));
  CHECK(a == b);
  cfg.seed = 12;
  CHECK(a != trace_to_string(cbs_run(cfg)));
}
