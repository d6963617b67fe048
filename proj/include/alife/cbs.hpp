#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "alife/config.hpp"
#include "alife/trace.hpp"

namespace alife {

// Binary-string chemistry: fixed-length strings copied with random errors
// restricted to a position mask.
struct CbsConfig {
  std::size_t n = 5;
  std::size_t population = 20;
  std::size_t copy_count = 5;       // copies made per step
  double error_prob = 0.05;         // per masked position, per copy
  std::vector<std::size_t> mask;    // 1-based positions; empty = even ones
  std::string policy = "constant";  // constant | grow
  std::uint64_t seed = 1;
  std::uint32_t steps = 100;
  std::vector<std::string> init;    // explicit strings; empty = random

  std::vector<std::size_t> effective_mask() const;  // resolved, validated
};

struct CbsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// n binary dimensions b1..bn, substantively ordered (0 < 1).
CharSpaceSchema cbs_schema(std::size_t n);

CbsConfig cbs_config_from_kv(const std::map<std::string, std::string>& kv);
CbsConfig cbs_config_from_file(const std::string& path);

Trace cbs_run(const CbsConfig& cfg);

// Default observer narrowed to the run's error mask: delta_rep_mut = 1
// exactly at masked positions.
ObserverConfig cbs_observer(const CbsConfig& cfg);

}  // namespace alife
