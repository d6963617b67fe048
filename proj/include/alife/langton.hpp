#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "alife/config.hpp"
#include "alife/trace.hpp"

namespace alife {

// Sparse 8-state grid; absent coordinate = quiescent (state 0).
struct Grid {
  std::unordered_map<std::uint64_t, std::uint8_t> cells;

  static std::uint64_t pack(std::int32_t x, std::int32_t y) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) |
           static_cast<std::uint32_t>(y);
  }
  static std::pair<std::int32_t, std::int32_t> unpack(std::uint64_t k) {
    return {static_cast<std::int32_t>(k >> 32),
            static_cast<std::int32_t>(k & 0xffffffffu)};
  }

  std::uint8_t at(std::int32_t x, std::int32_t y) const {
    auto it = cells.find(pack(x, y));
    return it == cells.end() ? 0 : it->second;
  }
  void set(std::int32_t x, std::int32_t y, std::uint8_t s) {
    if (s == 0) {
      cells.erase(pack(x, y));
    } else {
      cells[pack(x, y)] = s;
    }
  }
  std::size_t size() const { return cells.size(); }
};

struct LangtonError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Von Neumann transition table: (center, top, right, bottom, left) -> next.
// With rotation enabled, the four cyclic rotations of (T,R,B,L) share one
// entry; conflicting duplicates are load errors.
struct RuleTable {
  std::unordered_map<std::uint32_t, std::uint8_t> map;
  bool rotate = false;

  static std::uint32_t pack(int c, int t, int r, int b, int l) {
    return static_cast<std::uint32_t>(c << 12 | t << 9 | r << 6 | b << 3 | l);
  }
  std::optional<std::uint8_t> lookup(int c, int t, int r, int b, int l) const {
    auto it = map.find(pack(c, t, r, b, l));
    if (it == map.end()) return std::nullopt;
    return it->second;
  }
};

RuleTable load_rule_table(std::istream& in, const std::string& origin);
RuleTable load_rule_table_file(const std::string& path);

// Seed format: rows of digits 0-7, top row first. An optional header
// "@origin X Y" places the first character of the first row at (X, Y);
// default origin is (0, 0). y decreases downward, x increases rightward.
// '.' is an accepted alias for 0. Blank lines and '#' comments skipped.
Grid load_cells(std::istream& in, const std::string& origin);
Grid load_cells_file(const std::string& path);

// One synchronous update; missing rule for an encountered neighborhood is a
// hard error naming the 5-tuple.
Grid ca_step(const Grid& g, const RuleTable& table);

struct LangtonLoop {
  std::vector<std::tuple<std::int32_t, std::int32_t, std::uint8_t>> cells;
  std::int32_t pivot_x = 0;
  std::int32_t pivot_y = 0;
};

// 4-connected components of non-quiescent cells, each with its
// (min x, max y) pivot; sorted by pivot (x asc, then y desc).
std::vector<LangtonLoop> extract_entities(const Grid& g);

std::string geometry_string(const LangtonLoop& loop);  // pivot-normalized
std::string pivot_string(const LangtonLoop& loop);

// [d_g, d_p]: translation-normalized geometry equality and pivot equality.
DiffVector loop_diff(const LangtonLoop& a, const LangtonLoop& b);

// Dims: geometry (string), pivot (string); neither carries a substantive
// value order.
CharSpaceSchema langton_schema();

struct LangtonConfig {
  std::string table_path;
  std::string cells_path;
  std::uint32_t steps = 200;
  std::uint32_t snapshot = 1;  // observe every snapshot-th CA step
};

LangtonConfig langton_config_from_kv(
    const std::map<std::string, std::string>& kv);
LangtonConfig langton_config_from_file(const std::string& path);

// Runs the CA for cfg.steps steps, observing every cfg.snapshot-th grid:
// entities, pivots, causal events (pivot changed + both coordinate
// projections contained in the predecessor's). Asserts pivot uniqueness per
// observed state.
Trace langton_run(const LangtonConfig& cfg);

// Reconstructs the absolute cell set of one observed state.
Grid grid_from_state(const State& st);

// Text art: one row per y (top first); quiescent cells print '.'.
std::string render_grid(const Grid& g);

}  // namespace alife
