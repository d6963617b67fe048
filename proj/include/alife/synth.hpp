#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "alife/trace.hpp"

namespace alife {

// A synthetic-trace recipe with known ground truth. Two modes:
//
//   rates — one founder chain plus one mutant child chain per planted trait
//           value; child chain for value v produces `rate(v)` further
//           children. Ground truth: the distinct mutant variants are exactly
//           the planted values and each variant's reproduction rate is its
//           planted rate.
//   sizes — planted generation sizes: gen_sizes[0] founder chains, each
//           later generation born in one step with parents assigned
//           round-robin to the previous one. Ground truth: the generation
//           partition equals gen_sizes.
struct PlantedPlan {
  std::string mode = "rates";  // rates | sizes
  std::uint32_t steps = 0;     // 0 = minimal feasible horizon

  // rates mode
  std::vector<std::int64_t> values;  // distinct trait values, one child each
  std::vector<std::int64_t> rates;   // same length; children per child chain
  // by_value: rate(values[i]) = rates[i]. shuffled: each value draws its
  // rate independently (uniform) from the rates list, decoupling the two.
  std::string assignment = "by_value";
  std::int64_t founder_value = 0;

  // sizes mode
  std::vector<std::int64_t> gen_sizes;
};

struct PlanError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Single int dimension "trait", substantively ordered.
CharSpaceSchema synth_schema();

PlantedPlan plan_from_kv(const std::map<std::string, std::string>& kv);
PlantedPlan plan_from_file(const std::string& path);

Trace synth_trace(const PlantedPlan& plan, std::uint64_t seed);

}  // namespace alife
