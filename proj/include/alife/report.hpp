#pragma once

#include <iosfwd>

#include "alife/axioms.hpp"
#include "alife/relations.hpp"

namespace alife {

// Canonical check names, in render order.
extern const std::vector<std::string> kCheckNames;

bool is_check_name(const std::string& name);

struct Report {
  std::string model;
  std::string config_digest;
  AnalysisWindow window{0, 0};
  std::size_t instances = 0;
  std::size_t states = 0;
  std::size_t recognition_edges = 0;
  std::size_t causal_retained = 0;
  std::size_t causal_dropped = 0;
  std::size_t ancestor_edges = 0;
  std::size_t parent_edges = 0;
  std::vector<std::pair<std::string, Verdict>> checks;  // kCheckNames order
  std::vector<HeredityResult> heredity_dims;

  const Verdict* find(const std::string& name) const;
};

Report full_report(const Trace& trace, const RelationBundle& bundle,
                   const ObserverConfig& cfg);

// Machine form: one `key = value` line per field, fixed order, byte-stable.
void render_machine(std::ostream& out, const Report& r);
// Human form: sectioned summary.
void render_human(std::ostream& out, const Report& r);

// True iff any of the named checks (all when `requested` is empty) came out
// Violated. Drives the CLI exit status.
bool any_violated(const Report& r, const std::vector<std::string>& requested);

}  // namespace alife
