#include "alife/langton.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace alife {

namespace {

bool is_state_digit(char c) { return c >= '0' && c <= '7'; }

int digit(char c) { return c - '0'; }

std::string rule_key_to_string(int c, int t, int r, int b, int l) {
  std::ostringstream os;
  os << c << t << r << b << l;
  return os.str();
}

}  // namespace

RuleTable load_rule_table(std::istream& in, const std::string& origin) {
  RuleTable table;
  std::string line;
  std::size_t lineno = 0;
  // key -> (value, defining line) for conflict messages.
  std::unordered_map<std::uint32_t, std::pair<std::uint8_t, std::size_t>> defs;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "@rotate") {
      table.rotate = true;
      continue;
    }
    std::string arrow, result;
    if (!(ls >> arrow >> result) || arrow != "->" || first.size() != 5 ||
        result.size() != 1 || !is_state_digit(result[0]) ||
        !std::all_of(first.begin(), first.end(), is_state_digit)) {
      throw LangtonError(origin + ":" + std::to_string(lineno) +
                         ": expected 'CTRBL -> N' with digits 0-7");
    }
    std::string extra;
    if (ls >> extra) {
      throw LangtonError(origin + ":" + std::to_string(lineno) +
                         ": trailing content '" + extra + "'");
    }
    const int c = digit(first[0]);
    const int nb[4] = {digit(first[1]), digit(first[2]), digit(first[3]),
                       digit(first[4])};
    const auto value = static_cast<std::uint8_t>(digit(result[0]));
    const int rot_count = table.rotate ? 4 : 1;
    for (int rot = 0; rot < rot_count; ++rot) {
      const std::uint32_t key =
          RuleTable::pack(c, nb[rot % 4], nb[(rot + 1) % 4], nb[(rot + 2) % 4],
                          nb[(rot + 3) % 4]);
      auto it = defs.find(key);
      if (it != defs.end()) {
        if (it->second.first != value) {
          throw LangtonError(
              origin + ":" + std::to_string(lineno) + ": rule " + first +
              " conflicts with line " + std::to_string(it->second.second) +
              " (same neighborhood, different result)");
        }
        continue;
      }
      defs.emplace(key, std::make_pair(value, lineno));
      table.map.emplace(key, value);
    }
  }
  if (table.map.empty()) {
    throw LangtonError(origin + ": empty rule table");
  }
  return table;
}

RuleTable load_rule_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LangtonError("cannot open rule table: " + path);
  return load_rule_table(in, path);
}

Grid load_cells(std::istream& in, const std::string& origin) {
  Grid g;
  std::string line;
  std::size_t lineno = 0;
  std::int32_t origin_x = 0, origin_y = 0;
  std::int32_t row = 0;
  bool any_row = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\r' ||
                             line.back() == '\t')) {
      line.pop_back();
    }
    if (line.empty()) continue;
    if (line[0] == '@') {
      std::istringstream hs(line);
      std::string word;
      hs >> word;
      if (word != "@origin" || any_row || !(hs >> origin_x >> origin_y)) {
        throw LangtonError(origin + ":" + std::to_string(lineno) +
                           ": expected '@origin X Y' before the first row");
      }
      std::string extra;
      if (hs >> extra) {
        throw LangtonError(origin + ":" + std::to_string(lineno) +
                           ": trailing content '" + extra + "'");
      }
      continue;
    }
    for (std::size_t col = 0; col < line.size(); ++col) {
      const char ch = line[col];
      if (ch == '.') continue;
      if (!is_state_digit(ch)) {
        throw LangtonError(origin + ":" + std::to_string(lineno) +
                           ": bad cell character '" + std::string(1, ch) +
                           "'");
      }
      if (ch != '0') {
        g.set(origin_x + static_cast<std::int32_t>(col), origin_y - row,
              static_cast<std::uint8_t>(digit(ch)));
      }
    }
    ++row;
    any_row = true;
  }
  if (!any_row) throw LangtonError(origin + ": empty seed");
  return g;
}

Grid load_cells_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LangtonError("cannot open seed: " + path);
  return load_cells(in, path);
}

Grid ca_step(const Grid& g, const RuleTable& table) {
  // Candidates: every live cell plus its von Neumann neighbors.
  std::set<std::uint64_t> candidates;
  for (const auto& [key, state] : g.cells) {
    auto [x, y] = Grid::unpack(key);
    candidates.insert(Grid::pack(x, y));
    candidates.insert(Grid::pack(x, y + 1));
    candidates.insert(Grid::pack(x + 1, y));
    candidates.insert(Grid::pack(x, y - 1));
    candidates.insert(Grid::pack(x - 1, y));
  }
  Grid next;
  for (std::uint64_t key : candidates) {
    auto [x, y] = Grid::unpack(key);
    const int c = g.at(x, y);
    const int t = g.at(x, y + 1);
    const int r = g.at(x + 1, y);
    const int b = g.at(x, y - 1);
    const int l = g.at(x - 1, y);
    if (c == 0 && t == 0 && r == 0 && b == 0 && l == 0) continue;
    const auto result = table.lookup(c, t, r, b, l);
    if (!result) {
      throw LangtonError("no rule for neighborhood " +
                         rule_key_to_string(c, t, r, b, l) + " at (" +
                         std::to_string(x) + "," + std::to_string(y) + ")");
    }
    if (*result != 0) next.set(x, y, *result);
  }
  return next;
}

std::vector<LangtonLoop> extract_entities(const Grid& g) {
  std::vector<std::uint64_t> keys;
  keys.reserve(g.cells.size());
  for (const auto& [key, state] : g.cells) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  std::unordered_map<std::uint64_t, std::uint32_t> component;
  std::vector<LangtonLoop> loops;
  for (std::uint64_t start : keys) {
    if (component.count(start)) continue;
    const auto id = static_cast<std::uint32_t>(loops.size());
    LangtonLoop loop;
    std::vector<std::uint64_t> stack{start};
    component[start] = id;
    bool first = true;
    while (!stack.empty()) {
      const std::uint64_t cur = stack.back();
      stack.pop_back();
      auto [x, y] = Grid::unpack(cur);
      const std::uint8_t s = g.cells.at(cur);
      loop.cells.emplace_back(x, y, s);
      if (first || x < loop.pivot_x) loop.pivot_x = x;
      if (first || y > loop.pivot_y) loop.pivot_y = y;
      first = false;
      const std::int32_t nx[4] = {x, x + 1, x, x - 1};
      const std::int32_t ny[4] = {y + 1, y, y - 1, y};
      for (int i = 0; i < 4; ++i) {
        const std::uint64_t nk = Grid::pack(nx[i], ny[i]);
        if (g.cells.count(nk) && !component.count(nk)) {
          component[nk] = id;
          stack.push_back(nk);
        }
      }
    }
    std::sort(loop.cells.begin(), loop.cells.end(),
              [](const auto& a, const auto& b) {
                if (std::get<0>(a) != std::get<0>(b))
                  return std::get<0>(a) < std::get<0>(b);
                return std::get<1>(a) > std::get<1>(b);
              });
    loops.push_back(std::move(loop));
  }
  std::sort(loops.begin(), loops.end(),
            [](const LangtonLoop& a, const LangtonLoop& b) {
              if (a.pivot_x != b.pivot_x) return a.pivot_x < b.pivot_x;
              return a.pivot_y > b.pivot_y;
            });
  return loops;
}

std::string geometry_string(const LangtonLoop& loop) {
  std::ostringstream os;
  bool firstcell = true;
  for (const auto& [x, y, s] : loop.cells) {
    if (!firstcell) os << ';';
    firstcell = false;
    os << (x - loop.pivot_x) << ',' << (y - loop.pivot_y) << ':'
       << static_cast<int>(s);
  }
  return os.str();
}

std::string pivot_string(const LangtonLoop& loop) {
  std::ostringstream os;
  os << loop.pivot_x << ',' << loop.pivot_y;
  return os.str();
}

DiffVector loop_diff(const LangtonLoop& a, const LangtonLoop& b) {
  DiffVector d(2);
  d[0] = geometry_string(a) == geometry_string(b) ? 0 : 1;
  d[1] = (a.pivot_x == b.pivot_x && a.pivot_y == b.pivot_y) ? 0 : 1;
  return d;
}

CharSpaceSchema langton_schema() {
  CharSpaceSchema s;
  s.dims.push_back({"geometry", DimKind::Str, /*char_ordered=*/false,
                    /*diff_ordered=*/true});
  s.dims.push_back({"pivot", DimKind::Str, /*char_ordered=*/false,
                    /*diff_ordered=*/true});
  return s;
}

LangtonConfig langton_config_from_kv(
    const std::map<std::string, std::string>& kv) {
  LangtonConfig cfg;
  for (const auto& [key, val] : kv) {
    if (key == "table") {
      cfg.table_path = val;
    } else if (key == "cells") {
      cfg.cells_path = val;
    } else if (key == "steps") {
      cfg.steps = static_cast<std::uint32_t>(parse_int(val, key));
    } else if (key == "snapshot") {
      cfg.snapshot = static_cast<std::uint32_t>(parse_int(val, key));
    } else {
      throw LangtonError("unknown langton config key: " + key);
    }
  }
  if (cfg.table_path.empty()) throw LangtonError("langton config needs table");
  if (cfg.cells_path.empty()) throw LangtonError("langton config needs cells");
  if (cfg.snapshot == 0) throw LangtonError("snapshot interval must be >= 1");
  return cfg;
}

LangtonConfig langton_config_from_file(const std::string& path) {
  return langton_config_from_kv(parse_kv_file(path));
}

namespace {

struct ObservedState {
  std::vector<LangtonLoop> loops;
  std::vector<std::set<std::int32_t>> proj_x;
  std::vector<std::set<std::int32_t>> proj_y;
};

ObservedState observe_grid(const Grid& g, std::uint32_t state_index) {
  ObservedState obs;
  obs.loops = extract_entities(g);
  std::set<std::string> pivots;
  for (const LangtonLoop& loop : obs.loops) {
    if (!pivots.insert(pivot_string(loop)).second) {
      throw LangtonError("two entities share pivot " + pivot_string(loop) +
                         " in state " + std::to_string(state_index));
    }
    std::set<std::int32_t> px, py;
    for (const auto& [x, y, s] : loop.cells) {
      px.insert(x);
      py.insert(y);
    }
    obs.proj_x.push_back(std::move(px));
    obs.proj_y.push_back(std::move(py));
  }
  return obs;
}

// Containment is inclusive: a freshly split child can span the parent's
// full extent along one axis (side-by-side loops share the y band), so a
// strict test on both axes would miss real splits.
bool superset(const std::set<std::int32_t>& big,
              const std::set<std::int32_t>& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace

Trace langton_run(const LangtonConfig& cfg) {
  const RuleTable table = load_rule_table_file(cfg.table_path);
  Grid grid = load_cells_file(cfg.cells_path);

  Trace t;
  t.meta.model = "langton";
  t.meta.seed = 0;  // the CA is deterministic
  {
    std::ostringstream os;
    os << "table=" << cfg.table_path << ";cells=" << cfg.cells_path
       << ";steps=" << cfg.steps << ";snapshot=" << cfg.snapshot;
    t.meta.config_digest = hex64(fnv1a64(os.str()));
  }
  t.schema = langton_schema();

  ObservedState prev;
  std::uint32_t state_index = 0;
  for (std::uint32_t s = 0; s <= cfg.steps; ++s) {
    if (s > 0) grid = ca_step(grid, table);
    if (s % cfg.snapshot != 0) continue;
    ObservedState cur = observe_grid(grid, state_index);
    State st;
    st.index = state_index;
    for (const LangtonLoop& loop : cur.loops) {
      EntitySnapshot e;
      e.ref = {state_index, pivot_string(loop)};
      e.tag = {pivot_string(loop)};
      e.chars = {geometry_string(loop), pivot_string(loop)};
      st.entities.push_back(std::move(e));
    }
    if (state_index > 0) {
      for (std::size_t pi = 0; pi < prev.loops.size(); ++pi) {
        for (std::size_t ci = 0; ci < cur.loops.size(); ++ci) {
          const LangtonLoop& p = prev.loops[pi];
          const LangtonLoop& c = cur.loops[ci];
          if (p.pivot_x == c.pivot_x && p.pivot_y == c.pivot_y) continue;
          if (superset(prev.proj_x[pi], cur.proj_x[ci]) &&
              superset(prev.proj_y[pi], cur.proj_y[ci])) {
            st.causes.push_back(
                {{state_index - 1, pivot_string(p)},
                 {state_index, pivot_string(c)}});
          }
        }
      }
      std::sort(st.causes.begin(), st.causes.end());
    }
    t.states.push_back(std::move(st));
    prev = std::move(cur);
    ++state_index;
  }
  return t;
}

Grid grid_from_state(const State& st) {
  Grid g;
  for (const EntitySnapshot& e : st.entities) {
    if (e.chars.size() != 2) {
      throw LangtonError("state entity lacks geometry/pivot characters");
    }
    const std::string geom = char_value_to_string(e.chars[0]);
    const std::string piv = char_value_to_string(e.chars[1]);
    std::int32_t px = 0, py = 0;
    {
      std::istringstream ps(piv);
      char comma = 0;
      if (!(ps >> px >> comma >> py) || comma != ',') {
        throw LangtonError("bad pivot: " + piv);
      }
    }
    std::istringstream gs(geom);
    std::string item;
    while (std::getline(gs, item, ';')) {
      std::istringstream is(item);
      std::int32_t dx = 0, dy = 0;
      int sv = 0;
      char c1 = 0, c2 = 0;
      if (!(is >> dx >> c1 >> dy >> c2 >> sv) || c1 != ',' || c2 != ':') {
        throw LangtonError("bad geometry item: " + item);
      }
      g.set(px + dx, py + dy, static_cast<std::uint8_t>(sv));
    }
  }
  return g;
}

std::string render_grid(const Grid& g) {
  if (g.cells.empty()) return "";
  std::int32_t minx = 0, maxx = 0, miny = 0, maxy = 0;
  bool first = true;
  for (const auto& [key, state] : g.cells) {
    auto [x, y] = Grid::unpack(key);
    if (first) {
      minx = maxx = x;
      miny = maxy = y;
      first = false;
    }
    minx = std::min(minx, x);
    maxx = std::max(maxx, x);
    miny = std::min(miny, y);
    maxy = std::max(maxy, y);
  }
  std::ostringstream os;
  for (std::int32_t y = maxy; y >= miny; --y) {
    for (std::int32_t x = minx; x <= maxx; ++x) {
      const std::uint8_t s = g.at(x, y);
      os << (s == 0 ? '.' : static_cast<char>('0' + s));
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace alife
