#include "alife/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace alife {

AnalysisWindow ObserverConfig::effective_window(const Trace& t) const {
  if (window) return *window;
  AnalysisWindow w;
  if (!t.states.empty()) {
    w.first = t.states.front().index;
    w.last = t.states.back().index;
  }
  return w;
}

std::string ObserverConfig::digest() const {
  std::ostringstream os;
  os << "recognizer=" << recognizer << ";measure=" << measure << ";mut=";
  for (auto v : bounds.delta_mut) os << v << ',';
  os << ";rep=";
  for (auto v : bounds.delta_rep_mut) os << v << ',';
  os << ";thr=" << thresholds.min_reproducers << ','
     << thresholds.min_variant_children << ','
     << thresholds.heredity_ratio_tol << ',' << thresholds.min_window_len
     << ',' << thresholds.fecundity_tail << ";win=";
  if (window) os << window->first << ".." << window->last;
  return hex64(fnv1a64(os.str()));
}

ObserverConfig default_observer(const std::string& model,
                                const CharSpaceSchema& schema) {
  ObserverConfig cfg;
  std::size_t n = schema.arity();
  if (model == "cbs" || model == "synth") {
    cfg.recognizer = "tag";
    cfg.measure = model == "cbs" ? "xor" : "eq";
    cfg.bounds.delta_mut.assign(n, 0);
    // Reproduction bound: unconstrained by default; CBS runs carry their
    // error mask in the run config and observers narrow it there.
    cfg.bounds.delta_rep_mut.assign(n, 1);
    if (model == "synth")
      cfg.bounds.delta_rep_mut.assign(n, std::int64_t{1} << 40);
  } else if (model == "langton") {
    if (n != 2) throw ConfigError("langton schema must have 2 dims");
    cfg.recognizer = "langton-pivot";
    cfg.measure = "eq";
    cfg.bounds.delta_mut = {1, 0};
    cfg.bounds.delta_rep_mut = {0, 1};
  } else if (model == "alchemy") {
    if (n != 2) throw ConfigError("alchemy schema must have 2 dims");
    cfg.recognizer = "alchemy-tag";
    cfg.measure = "alchemy-tag";
    cfg.bounds.delta_mut = {0, 0};
    cfg.bounds.delta_rep_mut = {0, 1};
  } else {
    throw ConfigError("no default observer for model: " + model);
  }
  return cfg;
}

std::map<std::string, std::string> parse_kv_text(const std::string& text,
                                                 const std::string& origin) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto notspace = [](unsigned char c) { return !std::isspace(c); };
    auto b = std::find_if(line.begin(), line.end(), notspace);
    auto e = std::find_if(line.rbegin(), line.rend(), notspace).base();
    if (b >= e) continue;
    std::string trimmed(b, e);
    auto eq = trimmed.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected key = value");
    auto strip = [](std::string s) {
      auto sb = s.find_first_not_of(" \t");
      auto se = s.find_last_not_of(" \t");
      if (sb == std::string::npos) return std::string();
      return s.substr(sb, se - sb + 1);
    };
    std::string key = strip(trimmed.substr(0, eq));
    std::string val = strip(trimmed.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (!kv.emplace(key, val).second)
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": duplicate key " + key);
  }
  return kv;
}

std::map<std::string, std::string> parse_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_kv_text(os.str(), path);
}

std::int64_t parse_int(const std::string& s, const std::string& what) {
  std::int64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ConfigError("bad integer for " + what + ": '" + s + "'");
  return v;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad number for " + what + ": '" + s + "'");
  }
}

DiffVector parse_diff_list(const std::string& s, const std::string& what) {
  DiffVector out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ','))
    out.push_back(parse_int(item, what + " element"));
  return out;
}

void apply_observer_overrides(ObserverConfig& cfg,
                              const std::map<std::string, std::string>& kv) {
  for (const auto& [key, val] : kv) {
    if (key == "recognizer") {
      cfg.recognizer = val;
    } else if (key == "measure") {
      cfg.measure = val;
    } else if (key == "delta_mut") {
      cfg.bounds.delta_mut = parse_diff_list(val, key);
    } else if (key == "delta_rep_mut") {
      cfg.bounds.delta_rep_mut = parse_diff_list(val, key);
    } else if (key == "window") {
      auto list = parse_diff_list(val, key);
      if (list.size() != 2 || list[0] < 0 || list[1] < list[0])
        throw ConfigError("window must be 'first,last' with first <= last");
      cfg.window = AnalysisWindow{static_cast<std::uint32_t>(list[0]),
                                  static_cast<std::uint32_t>(list[1])};
    } else if (key == "min_reproducers") {
      cfg.thresholds.min_reproducers =
          static_cast<std::size_t>(parse_int(val, key));
    } else if (key == "min_variant_children") {
      cfg.thresholds.min_variant_children =
          static_cast<std::size_t>(parse_int(val, key));
    } else if (key == "heredity_ratio_tol") {
      cfg.thresholds.heredity_ratio_tol = parse_double(val, key);
    } else if (key == "min_window_len") {
      cfg.thresholds.min_window_len =
          static_cast<std::uint32_t>(parse_int(val, key));
    } else if (key == "fecundity_tail") {
      cfg.thresholds.fecundity_tail =
          static_cast<std::uint32_t>(parse_int(val, key));
    } else {
      throw ConfigError("unknown observer config key: " + key);
    }
  }
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

}  // namespace alife
