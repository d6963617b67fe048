#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "alife/chars.hpp"
#include "alife/trace.hpp"

namespace alife {

struct AnalysisWindow {
  std::uint32_t first = 0;
  std::uint32_t last = 0;  // inclusive

  std::uint32_t length() const { return last >= first ? last - first + 1 : 0; }
  bool contains(std::uint32_t s) const { return s >= first && s <= last; }
};

struct SelectionThresholds {
  std::size_t min_reproducers = 20;
  std::size_t min_variant_children = 10;
  double heredity_ratio_tol = 1.05;
  std::uint32_t min_window_len = 100;
  std::uint32_t fecundity_tail = 1;  // trailing generations exempt from growth
};

struct ObserverConfig {
  std::string recognizer;  // tag | langton-pivot | alchemy-tag
  std::string measure;     // xor | eq | hamming | alchemy-tag
  MutationBounds bounds;
  SelectionThresholds thresholds;
  std::optional<AnalysisWindow> window;  // default: whole trace

  AnalysisWindow effective_window(const Trace& t) const;
  std::string digest() const;  // stable content hash of the effective config
};

// Built-in observation setups for the shipped models (schema comes from the
// trace header; bounds are sized to it).
ObserverConfig default_observer(const std::string& model,
                                const CharSpaceSchema& schema);

// `key = value` lines; '#' comments; lists comma-separated.
std::map<std::string, std::string> parse_kv_file(const std::string& path);
std::map<std::string, std::string> parse_kv_text(const std::string& text,
                                                 const std::string& origin);

// Applies overrides from a key-value file onto a default config. Recognized
// keys: recognizer, measure, delta_mut, delta_rep_mut, window,
// min_reproducers, min_variant_children, heredity_ratio_tol, min_window_len,
// fecundity_tail.
void apply_observer_overrides(ObserverConfig& cfg,
                              const std::map<std::string, std::string>& kv);

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a64(const std::string& data);
std::string hex64(std::uint64_t v);

std::int64_t parse_int(const std::string& s, const std::string& what);
double parse_double(const std::string& s, const std::string& what);
DiffVector parse_diff_list(const std::string& s, const std::string& what);

}  // namespace alife
