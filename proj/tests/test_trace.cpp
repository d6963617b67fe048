#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "doctest.h"

#include "alife/trace.hpp"
#include "alife/trace_io.hpp"

using namespace alife;

namespace {

EntitySnapshot snap(std::uint32_t state, std::string id, Tag tag,
                    CharVector chars) {
  EntitySnapshot e;
  e.ref = {state, std::move(id)};
  e.tag = std::move(tag);
  e.chars = std::move(chars);
  return e;
}

Trace two_state_trace() {
  Trace t;
  t.meta.model = "handmade";
  t.meta.seed = 99;
  t.meta.config_digest = "0123456789abcdef";
  t.schema.dims.push_back({"trait", DimKind::Int, true, true});
  t.schema.dims.push_back({"label", DimKind::Str, false, false});

  State s0;
  s0.index = 0;
  s0.entities.push_back(
      snap(0, "a", {std::int64_t{1}}, {std::int64_t{7}, std::string("left")}));
  s0.entities.push_back(
      snap(0, "b", {std::int64_t{2}}, {std::int64_t{9}, std::string("right")}));
  t.states.push_back(std::move(s0));

  State s1;
  s1.index = 1;
  s1.entities.push_back(
      snap(1, "a", {std::int64_t{1}}, {std::int64_t{7}, std::string("left")}));
  s1.entities.push_back(
      snap(1, "c", {std::int64_t{3}}, {std::int64_t{7}, std::string("kid")}));
  s1.causes.push_back({{0, "a"}, {1, "c"}});
  t.states.push_back(std::move(s1));
  return t;
}

std::string temp_path(const std::string& stem) {
  return (std::filesystem::temp_directory_path() / stem).string();
}

}  // namespace

TEST_CASE("entity refs order and compare by state then id") {
  EntityRef a{0, "a"}, a2{0, "a"}, b{0, "b"}, later{1, "a"};
  CHECK(a == a2);
  CHECK(a != b);
  CHECK(a < b);
  CHECK(b < later);
  CHECK(to_string(later) == "s1/a");
}

TEST_CASE("tag_to_string joins mixed values with commas") {
  Tag t{std::int64_t{5}, std::string("1,2"), std::int64_t{-3}};
  CHECK(tag_to_string(t) == "5,1,2,-3");
  CHECK(tag_to_string(Tag{}) == "");
}

TEST_CASE("Trace::find locates snapshots by ref") {
  const Trace t = two_state_trace();
  const EntitySnapshot* hit = t.find({1, "c"});
  REQUIRE(hit != nullptr);
  CHECK(hit->ref.local_id == "c");
  CHECK(std::get<std::int64_t>(hit->chars[0]) == 7);
  CHECK(t.find({1, "zz"}) == nullptr);
  CHECK(t.find({9, "a"}) == nullptr);
}

TEST_CASE("write/read round trip is the identity on traces") {
  const Trace t = two_state_trace();
  const std::string text = trace_to_string(t);
  std::istringstream in(text);
  const Trace back = read_trace(in);
  CHECK(back == t);
  CHECK(trace_to_string(back) == text);
}

TEST_CASE("round trip survives hostile strings in ids and characters") {
  Trace t;
  t.meta.model = "handmade";
  t.schema.dims.push_back({"label", DimKind::Str, false, false});
  State s0;
  s0.index = 0;
  const std::string nasty = "sp ace\"quote\\slash\tπ\nnewline";
  s0.entities.push_back(snap(0, nasty, {std::string(nasty)}, {nasty}));
  t.states.push_back(std::move(s0));

  const std::string text = trace_to_string(t);
  std::istringstream in(text);
  const Trace back = read_trace(in);
  REQUIRE(back.states.size() == 1);
  REQUIRE(back.states[0].entities.size() == 1);
  CHECK(back == t);
}

TEST_CASE("file round trip is byte-stable") {
  const Trace t = two_state_trace();
  const std::string path = temp_path("alife_roundtrip.trace");
  write_trace_file(path, t);
  const Trace back = read_trace_file(path);
  CHECK(back == t);
  write_trace_file(path, back);
  const Trace again = read_trace_file(path);
  CHECK(trace_to_string(again) == trace_to_string(t));
  std::remove(path.c_str());
}

TEST_CASE("schema json round trip keeps dim flags") {
  CharSpaceSchema s;
  s.dims.push_back({"bit", DimKind::Int, true, true});
  s.dims.push_back({"shape", DimKind::Str, false, false});
  const CharSpaceSchema back = schema_from_json(schema_to_json(s));
  REQUIRE(back.arity() == 2);
  CHECK(back.dims[0].name == "bit");
  CHECK(back.dims[0].kind == DimKind::Int);
  CHECK(back.dims[0].char_ordered);
  CHECK(back.dims[0].diff_ordered);
  CHECK(back.dims[1].name == "shape");
  CHECK(back.dims[1].kind == DimKind::Str);
  CHECK_FALSE(back.dims[1].char_ordered);
  CHECK_FALSE(back.dims[1].diff_ordered);
  CHECK(s.dim_index("shape") == 1);
  CHECK(s.dim_index("missing") == -1);
}

TEST_CASE("reader rejects malformed input with line numbers") {
  auto read_text = [](const std::string& text) {
    std::istringstream in(text);
    return read_trace(in);
  };
  const std::string full = trace_to_string(two_state_trace());
  const std::string header = full.substr(0, full.find('\n') + 1);

  SUBCASE("empty stream") {
    CHECK_THROWS_AS(read_text(""), TraceIoError);
  }
  SUBCASE("non-json header") {
    try {
      read_text("not json\n");
      FAIL("expected TraceIoError");
    } catch (const TraceIoError& e) {
      CHECK(e.line == 1);
    }
  }
  SUBCASE("header missing fields") {
    CHECK_THROWS_AS(read_text("{\"model\":\"x\"}\n"), TraceIoError);
  }
  SUBCASE("unsupported format version") {
    CHECK_THROWS_AS(
        read_text("{\"format_version\":2,\"model\":\"x\",\"seed\":0,"
                   "\"config_digest\":\"\",\"schema\":{\"dims\":[]}}\n"),
        TraceIoError);
  }
  SUBCASE("malformed state line") {
    try {
      read_text(header + "oops\n");
      FAIL("expected TraceIoError");
    } catch (const TraceIoError& e) {
      CHECK(e.line == 2);
    }
  }
  SUBCASE("cause record of wrong arity") {
    CHECK_THROWS_AS(
        read_text(header +
                   "{\"index\":0,\"entities\":[],\"causes\":[[0,\"a\",1]]}\n"),
        TraceIoError);
  }
  SUBCASE("non-increasing state index") {
    const std::string st = "{\"index\":0,\"entities\":[],\"causes\":[]}\n";
    CHECK_THROWS_AS(read_text(header + st + st), TraceIoError);
  }
}

TEST_CASE("validate_trace accepts a well-formed trace") {
  CHECK(validate_trace(two_state_trace()).ok());
}

TEST_CASE("validate_trace reports each issue kind") {
  auto kinds = [](const Trace& t) {
    std::vector<std::string> out;
    for (const auto& issue : validate_trace(t).issues) out.push_back(issue.kind);
    return out;
  };

  SUBCASE("duplicate id / tag") {
    Trace t = two_state_trace();
    t.states[0].entities.push_back(
        snap(0, "a", {std::int64_t{1}},
             {std::int64_t{0}, std::string("dup")}));
    const auto ks = kinds(t);
    CHECK(std::count(ks.begin(), ks.end(), "duplicate-tag") == 2);
  }
  SUBCASE("gap in state indices") {
    Trace t = two_state_trace();
    t.states[1].index = 3;
    for (auto& e : t.states[1].entities) e.ref.state_index = 3;
    t.states[1].causes.clear();
    const auto ks = kinds(t);
    REQUIRE(ks.size() == 1);
    CHECK(ks[0] == "bad-index");
  }
  SUBCASE("snapshot ref disagrees with its state") {
    Trace t = two_state_trace();
    t.states[0].entities[1].ref.state_index = 5;
    const auto ks = kinds(t);
    REQUIRE(ks.size() == 1);
    CHECK(ks[0] == "bad-ref");
  }
  SUBCASE("character arity mismatch") {
    Trace t = two_state_trace();
    t.states[1].entities[0].chars.pop_back();
    const auto ks = kinds(t);
    REQUIRE(ks.size() == 1);
    CHECK(ks[0] == "arity");
  }
  SUBCASE("event spanning more than one step") {
    Trace t = two_state_trace();
    t.states[1].causes[0].parent.state_index = 1;
    const auto ks = kinds(t);
    REQUIRE(ks.size() == 1);
    CHECK(ks[0] == "event");
  }
  SUBCASE("event referencing a missing entity") {
    Trace t = two_state_trace();
    t.states[1].causes[0].parent.local_id = "ghost";
    const auto ks = kinds(t);
    REQUIRE(ks.size() == 1);
    CHECK(ks[0] == "event");
  }
}
