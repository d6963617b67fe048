#include "alife/alchemy.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "alife/rng.hpp"

namespace alife {

namespace {

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct RandomInit {
  std::uint32_t depth = 0;
  TermGenWeights weights;
};

RandomInit parse_random_init(const std::string& params) {
  RandomInit ri;
  bool have_depth = false;
  for (const std::string& kv : split_commas(params)) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw AlchemyError("random init expects key=value params: " + kv);
    const std::string key = kv.substr(0, eq);
    const std::int64_t val = parse_int(kv.substr(eq + 1), "init." + key);
    if (val < 0) throw AlchemyError("init." + key + " must be >= 0");
    if (key == "depth") {
      ri.depth = static_cast<std::uint32_t>(val);
      have_depth = true;
    } else if (key == "var") {
      ri.weights.var = static_cast<std::uint32_t>(val);
    } else if (key == "abs") {
      ri.weights.abs = static_cast<std::uint32_t>(val);
    } else if (key == "app") {
      ri.weights.app = static_cast<std::uint32_t>(val);
    } else {
      throw AlchemyError("unknown random init param: " + key);
    }
  }
  if (!have_depth) throw AlchemyError("random init requires depth=N");
  return ri;
}

}  // namespace

AlchemyConfig alchemy_config_from_kv(
    const std::map<std::string, std::string>& kv) {
  AlchemyConfig cfg;
  for (const auto& [key, val] : kv) {
    if (key == "population") {
      cfg.population = static_cast<std::uint32_t>(parse_int(val, key));
    } else if (key == "max_steps") {
      cfg.max_steps = static_cast<std::uint32_t>(parse_int(val, key));
    } else if (key == "max_size") {
      cfg.max_size = static_cast<std::uint32_t>(parse_int(val, key));
    } else if (key == "collisions") {
      cfg.collisions = static_cast<std::uint32_t>(parse_int(val, key));
    } else if (key == "init") {
      cfg.init = val;
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_int(val, key));
    } else {
      throw AlchemyError("unknown alchemy config key: " + key);
    }
  }
  if (cfg.max_steps == 0) throw AlchemyError("max_steps must be >= 1");
  if (cfg.max_size == 0) throw AlchemyError("max_size must be >= 1");
  if (cfg.init.rfind("list:", 0) == 0) {
    const auto terms = split_commas(cfg.init.substr(5));
    if (terms.size() < 2) throw AlchemyError("init list needs >= 2 terms");
    cfg.population = static_cast<std::uint32_t>(terms.size());
  } else if (cfg.init.rfind("random:", 0) == 0) {
    parse_random_init(cfg.init.substr(7));  // validate eagerly
  } else {
    throw AlchemyError("init must start with list: or random:");
  }
  if (cfg.population < 2) throw AlchemyError("population must be >= 2");
  return cfg;
}

AlchemyConfig alchemy_config_from_file(const std::string& path) {
  return alchemy_config_from_kv(parse_kv_file(path));
}

std::vector<TermPtr> alchemy_initial_terms(const AlchemyConfig& cfg) {
  std::vector<TermPtr> terms;
  if (cfg.init.rfind("list:", 0) == 0) {
    for (const std::string& text : split_commas(cfg.init.substr(5))) {
      TermPtr t = parse_term(text);
      if (!free_vars(t).empty()) {
        throw AlchemyError("init term has free variables: " + text);
      }
      terms.push_back(std::move(t));
    }
  } else {
    const RandomInit ri = parse_random_init(cfg.init.substr(7));
    // Dedicated stream so soup dynamics draws are independent of init.
    Rng rng(cfg.seed ^ 0x616c6368656d7960ULL);
    for (std::uint32_t i = 0; i < cfg.population; ++i) {
      terms.push_back(random_term(rng, ri.depth, ri.weights));
    }
  }
  return terms;
}

CharSpaceSchema alchemy_schema() {
  CharSpaceSchema s;
  s.dims.push_back({"term", DimKind::Str, /*char_ordered=*/false,
                    /*diff_ordered=*/true});
  s.dims.push_back({"tag", DimKind::Str, /*char_ordered=*/false,
                    /*diff_ordered=*/true});
  return s;
}

namespace {

struct Molecule {
  TermPtr term;
  std::string canon;
  std::int64_t size = 0;
  std::int64_t lex = 0;
  std::int64_t mul = 0;

  std::string tag_string() const {
    return std::to_string(size) + ',' + std::to_string(lex) + ',' +
           std::to_string(mul);
  }
};

// Lexicographic ranks within each size class, assigned once per distinct
// canonical form and never re-packed (rank stability keeps tags, and with
// them recognition, sound across deaths and re-arrivals).
struct LexRegistry {
  std::map<std::int64_t, std::map<std::string, std::int64_t>> by_size;

  std::int64_t assign(std::int64_t size, const std::string& canon) {
    auto& ranks = by_size[size];
    auto it = ranks.find(canon);
    if (it != ranks.end()) return it->second;
    const std::int64_t rank = static_cast<std::int64_t>(ranks.size()) + 1;
    ranks.emplace(canon, rank);
    return rank;
  }
};

std::string config_digest(const AlchemyConfig& cfg) {
  std::ostringstream os;
  os << "population=" << cfg.population << ";max_steps=" << cfg.max_steps
     << ";max_size=" << cfg.max_size << ";collisions=" << cfg.collisions
     << ";init=" << cfg.init << ";seed=" << cfg.seed;
  return hex64(fnv1a64(os.str()));
}

void emit_state(Trace& trace, std::uint32_t index,
                const std::vector<Molecule>& soup,
                std::vector<CausalEvent> causes) {
  State st;
  st.index = index;
  std::unordered_set<std::string> seen;
  for (const Molecule& m : soup) {
    EntitySnapshot e;
    const std::string ts = m.tag_string();
    if (!seen.insert(ts).second) {
      throw AlchemyError("duplicate tag " + ts + " at state " +
                         std::to_string(index));
    }
    e.ref = {index, ts};
    e.tag = {m.size, m.lex, m.mul};
    e.chars = {m.canon, ts};
    st.entities.push_back(std::move(e));
  }
  st.causes = std::move(causes);
  trace.states.push_back(std::move(st));
}

}  // namespace

Trace alchemy_run(const AlchemyConfig& cfg) {
  const std::vector<TermPtr> initial = alchemy_initial_terms(cfg);

  LexRegistry registry;
  std::vector<Molecule> soup;
  soup.reserve(initial.size() + 1);
  for (const TermPtr& t : initial) {
    Molecule m;
    m.term = t;
    m.canon = print_canonical(t);
    m.size = term_size(t);
    soup.push_back(std::move(m));
  }
  // Initial ranks: distinct forms of each size in lexicographic order.
  {
    std::map<std::int64_t, std::set<std::string>> initial_forms;
    for (const Molecule& m : soup) initial_forms[m.size].insert(m.canon);
    for (const auto& [size, forms] : initial_forms) {
      for (const std::string& canon : forms) registry.assign(size, canon);
    }
  }
  // Copies of one form are numbered 1, 2, ... in soup order.
  {
    std::map<std::string, std::int64_t> copies;
    for (Molecule& m : soup) {
      m.lex = registry.assign(m.size, m.canon);
      m.mul = ++copies[m.canon];
    }
  }

  Trace trace;
  trace.meta.model = "alchemy";
  trace.meta.seed = cfg.seed;
  trace.meta.config_digest = config_digest(cfg);
  trace.schema = alchemy_schema();
  emit_state(trace, 0, soup, {});

  Rng rng(cfg.seed);
  for (std::uint32_t c = 1; c <= cfg.collisions; ++c) {
    const std::size_t n = soup.size();
    const std::size_t i = static_cast<std::size_t>(rng.below(n));
    std::size_t j = static_cast<std::size_t>(rng.below(n - 1));
    if (j >= i) ++j;

    const std::string parent_a = soup[i].tag_string();
    const std::string parent_b = soup[j].tag_string();
    const ReduceResult r =
        reduce(make_app(soup[i].term, soup[j].term), cfg.max_steps,
               cfg.max_size);
    const bool reacted = r.status != ReduceStatus::Exhausted;

    std::vector<CausalEvent> causes;
    if (reacted && n > 2) {
      // One uniformly random victim among the non-reactants (the product is
      // not in the soup yet, so it is naturally exempt).
      std::size_t v = static_cast<std::size_t>(rng.below(n - 2));
      for (std::size_t k = 0;; ++k) {
        if (k == i || k == j) continue;
        if (v == 0) {
          soup.erase(soup.begin() + static_cast<std::ptrdiff_t>(k));
          break;
        }
        --v;
      }
    }
    for (Molecule& m : soup) ++m.mul;
    if (reacted) {
      Molecule prod;
      prod.term = r.term;
      prod.canon = print_canonical(r.term);
      prod.size = term_size(r.term);
      prod.lex = registry.assign(prod.size, prod.canon);
      prod.mul = 1;
      const std::string child = prod.tag_string();
      soup.push_back(std::move(prod));
      causes.push_back({{c - 1, parent_a}, {c, child}});
      causes.push_back({{c - 1, parent_b}, {c, child}});
    }
    emit_state(trace, c, soup, std::move(causes));
  }
  return trace;
}

namespace {

// Tarjan strongly-connected components over a small class digraph.
struct SccFinder {
  const std::vector<std::vector<std::uint32_t>>& adj;
  std::vector<std::int32_t> index, low;
  std::vector<bool> on_stack;
  std::vector<std::uint32_t> stack;
  std::int32_t counter = 0;
  std::vector<std::vector<std::uint32_t>> components;

  explicit SccFinder(const std::vector<std::vector<std::uint32_t>>& a)
      : adj(a), index(a.size(), -1), low(a.size(), 0), on_stack(a.size()) {}

  void run() {
    for (std::uint32_t v = 0; v < adj.size(); ++v) {
      if (index[v] < 0) strongconnect(v);
    }
  }

  void strongconnect(std::uint32_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::uint32_t w : adj[v]) {
      if (index[w] < 0) {
        strongconnect(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::uint32_t> comp;
      std::uint32_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      components.push_back(std::move(comp));
    }
  }
};

}  // namespace

Level0Report detect_level0(const Trace& trace, const RelationBundle& bundle) {
  const TraceIndex& idx = bundle.idx;
  if (trace.meta.model != "alchemy") {
    throw AlchemyError("level-0 detection runs on alchemy traces only");
  }
  const auto cls = [&idx](std::uint32_t id) -> const std::string& {
    return std::get<std::string>(idx.snap(id).chars.at(0));
  };

  std::set<std::string> copiers;
  std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> parents_of;
  for (const auto& [p, c] : bundle.causal.retained.edges) {
    if (cls(p) == cls(c)) copiers.insert(cls(p));
    parents_of[c].push_back(p);
  }
  // Fixpoint self-copiers: a collision of two alpha-equal reactants whose
  // product is the reactant applied to itself reproduces the reactant as a
  // combination of copies.
  for (const auto& [c, ps] : parents_of) {
    if (ps.size() != 2 || cls(ps[0]) != cls(ps[1])) continue;
    const TermPtr t = parse_term(cls(ps[0]));
    if (print_canonical(make_app(t, t)) == cls(c)) copiers.insert(cls(ps[0]));
  }

  // Classes with an AncestorOf pair of their own instances.
  std::set<std::string> evident;
  for (const auto& [a, b] : bundle.graph.ancestor) {
    if (cls(a) == cls(b)) evident.insert(cls(a));
  }

  // Class-level production digraph, restricted to evident classes.
  std::map<std::string, std::uint32_t> node_of;
  std::vector<std::string> class_of;
  const auto node = [&](const std::string& c) {
    auto [it, fresh] = node_of.emplace(c, class_of.size());
    if (fresh) class_of.push_back(c);
    return it->second;
  };
  std::vector<std::pair<std::uint32_t, std::uint32_t>> raw_edges;
  for (const auto& [p, c] : bundle.causal.retained.edges) {
    if (evident.count(cls(p)) == 0 || evident.count(cls(c)) == 0) continue;
    raw_edges.emplace_back(node(cls(p)), node(cls(c)));
  }
  std::vector<std::vector<std::uint32_t>> adj(class_of.size());
  std::sort(raw_edges.begin(), raw_edges.end());
  raw_edges.erase(std::unique(raw_edges.begin(), raw_edges.end()),
                  raw_edges.end());
  for (const auto& [a, b] : raw_edges) adj[a].push_back(b);

  SccFinder scc(adj);
  scc.run();

  Level0Report report;
  report.self_copiers.assign(copiers.begin(), copiers.end());
  for (const auto& comp : scc.components) {
    if (comp.size() < 2) continue;
    std::vector<std::string> names;
    for (std::uint32_t v : comp) names.push_back(class_of[v]);
    std::sort(names.begin(), names.end());
    report.hypercycles.push_back(std::move(names));
  }
  std::sort(report.hypercycles.begin(), report.hypercycles.end());
  return report;
}

}  // namespace alife
