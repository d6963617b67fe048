#include "alife/cbs.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "alife/rng.hpp"

namespace alife {

std::vector<std::size_t> CbsConfig::effective_mask() const {
  std::vector<std::size_t> m = mask;
  if (m.empty()) {
    for (std::size_t p = 2; p <= n; p += 2) m.push_back(p);
  }
  std::sort(m.begin(), m.end());
  m.erase(std::unique(m.begin(), m.end()), m.end());
  for (std::size_t p : m) {
    if (p < 1 || p > n) {
      throw CbsError("mask position " + std::to_string(p) +
                     " outside 1.." + std::to_string(n));
    }
  }
  return m;
}

CharSpaceSchema cbs_schema(std::size_t n) {
  CharSpaceSchema s;
  for (std::size_t i = 1; i <= n; ++i) {
    s.dims.push_back({"b" + std::to_string(i), DimKind::Int,
                      /*char_ordered=*/true, /*diff_ordered=*/true});
  }
  return s;
}

CbsConfig cbs_config_from_kv(const std::map<std::string, std::string>& kv) {
  CbsConfig cfg;
  for (const auto& [key, val] : kv) {
    if (key == "n") {
      cfg.n = static_cast<std::size_t>(parse_int(val, key));
    } else if (key == "population") {
      cfg.population = static_cast<std::size_t>(parse_int(val, key));
    } else if (key == "copy_count") {
      cfg.copy_count = static_cast<std::size_t>(parse_int(val, key));
    } else if (key == "error_prob") {
      cfg.error_prob = parse_double(val, key);
    } else if (key == "error_mask") {
      if (val == "even") {
        cfg.mask.clear();
      } else {
        cfg.mask.clear();
        for (std::int64_t p : parse_diff_list(val, key)) {
          if (p < 1) throw CbsError("error_mask positions are 1-based");
          cfg.mask.push_back(static_cast<std::size_t>(p));
        }
      }
    } else if (key == "policy") {
      cfg.policy = val;
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_int(val, key));
    } else if (key == "steps") {
      cfg.steps = static_cast<std::uint32_t>(parse_int(val, key));
    } else if (key == "init") {
      cfg.init.clear();
      std::istringstream in(val);
      std::string item;
      while (std::getline(in, item, ',')) {
        if (!item.empty()) cfg.init.push_back(item);
      }
    } else {
      throw CbsError("unknown cbs config key: " + key);
    }
  }
  if (cfg.n < 1) throw CbsError("n must be >= 1");
  if (cfg.error_prob < 0.0 || cfg.error_prob > 1.0) {
    throw CbsError("error_prob must lie in [0,1]");
  }
  if (cfg.policy != "constant" && cfg.policy != "grow") {
    throw CbsError("unknown policy: " + cfg.policy);
  }
  for (const std::string& s : cfg.init) {
    if (s.size() != cfg.n) {
      throw CbsError("init string '" + s + "' is not length " +
                     std::to_string(cfg.n));
    }
    for (char c : s) {
      if (c != '0' && c != '1') {
        throw CbsError("init string '" + s + "' is not binary");
      }
    }
  }
  cfg.effective_mask();  // validate bounds
  return cfg;
}

CbsConfig cbs_config_from_file(const std::string& path) {
  return cbs_config_from_kv(parse_kv_file(path));
}

namespace {

struct Individual {
  std::int64_t tag = 0;
  std::vector<std::uint8_t> bits;
};

std::string config_digest(const CbsConfig& cfg) {
  std::ostringstream os;
  os << "n=" << cfg.n << ";population=" << cfg.population
     << ";copy_count=" << cfg.copy_count << ";error_prob=" << cfg.error_prob
     << ";mask=";
  for (std::size_t p : cfg.effective_mask()) os << p << ',';
  os << ";policy=" << cfg.policy << ";seed=" << cfg.seed
     << ";steps=" << cfg.steps << ";init=";
  for (const std::string& s : cfg.init) os << s << ',';
  return hex64(fnv1a64(os.str()));
}

void emit_state(Trace& t, std::uint32_t index,
                const std::vector<Individual>& pop,
                std::vector<CausalEvent> causes) {
  State st;
  st.index = index;
  for (const Individual& ind : pop) {
    EntitySnapshot e;
    e.ref = {index, std::to_string(ind.tag)};
    e.tag = {ind.tag};
    e.chars.reserve(ind.bits.size());
    for (std::uint8_t b : ind.bits) {
      e.chars.emplace_back(static_cast<std::int64_t>(b));
    }
    st.entities.push_back(std::move(e));
  }
  std::sort(causes.begin(), causes.end());
  st.causes = std::move(causes);
  t.states.push_back(std::move(st));
}

}  // namespace

Trace cbs_run(const CbsConfig& cfg) {
  const std::vector<std::size_t> mask = cfg.effective_mask();
  Rng rng(cfg.seed);

  std::vector<Individual> pop;
  std::int64_t next_tag = 1;
  if (!cfg.init.empty()) {
    for (const std::string& s : cfg.init) {
      Individual ind;
      ind.tag = next_tag++;
      for (char c : s) ind.bits.push_back(c == '1' ? 1 : 0);
      pop.push_back(std::move(ind));
    }
  } else {
    for (std::size_t i = 0; i < cfg.population; ++i) {
      Individual ind;
      ind.tag = next_tag++;
      for (std::size_t b = 0; b < cfg.n; ++b) {
        ind.bits.push_back(static_cast<std::uint8_t>(rng.below(2)));
      }
      pop.push_back(std::move(ind));
    }
  }

  Trace t;
  t.meta.model = "cbs";
  t.meta.seed = cfg.seed;
  t.meta.config_digest = config_digest(cfg);
  t.schema = cbs_schema(cfg.n);
  emit_state(t, 0, pop, {});

  for (std::uint32_t step = 0; step < cfg.steps; ++step) {
    std::vector<CausalEvent> causes;
    std::vector<Individual> children;
    std::set<std::int64_t> parents_used;
    if (!pop.empty()) {
      for (std::size_t c = 0; c < cfg.copy_count; ++c) {
        const Individual& parent =
            pop[static_cast<std::size_t>(rng.below(pop.size()))];
        parents_used.insert(parent.tag);
        Individual child;
        child.tag = next_tag++;
        child.bits = parent.bits;
        for (std::size_t p : mask) {
          if (rng.chance(cfg.error_prob)) child.bits[p - 1] ^= 1;
        }
        causes.push_back({{step, std::to_string(parent.tag)},
                          {step + 1, std::to_string(child.tag)}});
        children.push_back(std::move(child));
      }
    }
    if (cfg.policy == "constant" && !children.empty()) {
      // Drop as many non-parents as children were added; same-step parents
      // and children are never eligible.
      std::vector<std::size_t> eligible;
      for (std::size_t i = 0; i < pop.size(); ++i) {
        if (!parents_used.count(pop[i].tag)) eligible.push_back(i);
      }
      const std::size_t removals = std::min(children.size(), eligible.size());
      for (std::size_t r = 0; r < removals; ++r) {
        const std::size_t pick =
            r + static_cast<std::size_t>(rng.below(eligible.size() - r));
        std::swap(eligible[r], eligible[pick]);
      }
      std::set<std::size_t> removed(eligible.begin(),
                                    eligible.begin() +
                                        static_cast<std::ptrdiff_t>(removals));
      std::vector<Individual> survivors;
      for (std::size_t i = 0; i < pop.size(); ++i) {
        if (!removed.count(i)) survivors.push_back(std::move(pop[i]));
      }
      pop = std::move(survivors);
    }
    for (Individual& child : children) pop.push_back(std::move(child));
    std::sort(pop.begin(), pop.end(),
              [](const Individual& a, const Individual& b) {
                return a.tag < b.tag;
              });
    emit_state(t, step + 1, pop, std::move(causes));
  }
  return t;
}

ObserverConfig cbs_observer(const CbsConfig& cfg) {
  ObserverConfig obs = default_observer("cbs", cbs_schema(cfg.n));
  obs.bounds.delta_rep_mut.assign(cfg.n, 0);
  for (std::size_t p : cfg.effective_mask()) {
    obs.bounds.delta_rep_mut[p - 1] = 1;
  }
  return obs;
}

}  // namespace alife
