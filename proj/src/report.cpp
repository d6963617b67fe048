#include "alife/report.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace alife {

const char* to_string(Status s) {
  switch (s) {
    case Status::Satisfied:
      return "Satisfied";
    case Status::Violated:
      return "Violated";
    case Status::Undetermined:
      return "Undetermined";
  }
  return "Undetermined";
}

Verdict satisfied(std::string reason) {
  Verdict v;
  v.status = Status::Satisfied;
  v.reason = std::move(reason);
  return v;
}

Verdict violated(std::string reason) {
  Verdict v;
  v.status = Status::Violated;
  v.reason = std::move(reason);
  return v;
}

Verdict undetermined(std::string reason) {
  Verdict v;
  v.status = Status::Undetermined;
  v.reason = std::move(reason);
  return v;
}

const std::vector<std::string> kCheckNames = {
    "recognition-step",     "recognition-injective",
    "recognition-bounded",  "causal-unambiguous",
    "reproduction",         "fecundity",
    "preservation",         "heredity",
    "evolutionary-time-scale", "sorting",
    "heritable-variation",  "correlation",
};

bool is_check_name(const std::string& name) {
  return std::find(kCheckNames.begin(), kCheckNames.end(), name) !=
         kCheckNames.end();
}

const Verdict* Report::find(const std::string& name) const {
  for (const auto& [n, v] : checks) {
    if (n == name) return &v;
  }
  return nullptr;
}

namespace {

Verdict causal_verdict(const TraceIndex& idx, const CausalRelation& causal) {
  if (causal.dropped.empty()) {
    Verdict v = satisfied("every recorded event names an unrecognized child");
    v.details["retained"] = std::to_string(causal.retained.size());
    return v;
  }
  std::map<std::string, std::size_t> by_reason;
  for (const DroppedEvent& d : causal.dropped) ++by_reason[d.reason];
  std::ostringstream os;
  os << causal.dropped.size() << " event(s) dropped";
  Verdict v = violated(os.str());
  for (const auto& [reason, count] : by_reason) {
    v.details["dropped_" + reason] = std::to_string(count);
  }
  for (std::size_t i = 0; i < causal.dropped.size() && i < 4; ++i) {
    const CausalEvent& e = causal.dropped[i].event;
    std::ostringstream w;
    w << e.parent.state_index << "/" << e.parent.local_id << " -> "
      << e.child.state_index << "/" << e.child.local_id << " ("
      << causal.dropped[i].reason << ")";
    v.witnesses.push_back(w.str());
  }
  (void)idx;
  return v;
}

Verdict heredity_aggregate(const TraceIndex& idx, const AncestryGraph& graph,
                           const ObserverConfig& cfg, const AnalysisWindow& w,
                           const std::vector<HeredityResult>& dims) {
  bool any_mutant = false;
  for (const Edge& e : parent_pairs_in_window(idx, graph, w)) {
    if (is_mutant_pair(idx, cfg, e)) {
      any_mutant = true;
      break;
    }
  }
  if (!any_mutant) {
    return undetermined(
        "no reproductive mutation in window; inheritance is not "
        "distinguishable from mere copying");
  }
  std::vector<std::string> ok;
  bool any_determined = false;
  for (const HeredityResult& h : dims) {
    if (h.verdict.status == Status::Satisfied) ok.push_back(h.dim);
    if (h.verdict.status != Status::Undetermined) any_determined = true;
  }
  Verdict v;
  if (!ok.empty()) {
    std::ostringstream os;
    os << "dimension(s) inherited within tolerance:";
    for (const std::string& d : ok) os << ' ' << d;
    v = satisfied(os.str());
  } else if (any_determined) {
    v = violated("no dimension stays within the inheritance tolerance");
  } else {
    v = undetermined("no dimension yields a determined inheritance ratio");
  }
  v.details["dims_satisfied"] = std::to_string(ok.size());
  v.details["dims_total"] = std::to_string(dims.size());
  return v;
}

}  // namespace

Report full_report(const Trace& trace, const RelationBundle& bundle,
                   const ObserverConfig& cfg) {
  Report r;
  r.model = trace.meta.model;
  r.config_digest = cfg.digest();
  r.window = cfg.effective_window(trace);
  r.instances = bundle.idx.size();
  r.states = trace.states.size();
  r.recognition_edges = bundle.recognition.next.size();
  r.causal_retained = bundle.causal.retained.size();
  r.causal_dropped = bundle.causal.dropped.size();
  r.ancestor_edges = bundle.graph.ancestor.size();
  r.parent_edges = bundle.graph.parent.size();

  const TraceIndex& idx = bundle.idx;
  const AncestryGraph& graph = bundle.graph;
  const AnalysisWindow w = r.window;

  const ChainIndex chains = build_chains(idx, bundle.recognition);
  std::vector<EntityRef> founders;
  for (std::uint32_t id = 0; id < idx.size(); ++id) {
    if (idx.state_index(id) == w.first) founders.push_back(idx.snap(id).ref);
  }
  const GenerationPartition part = generations(idx, graph, chains, founders);

  for (std::size_t d = 0; d < trace.schema.arity(); ++d) {
    r.heredity_dims.push_back(heredity_ratio(idx, graph, cfg, w, d));
  }

  r.checks.emplace_back("recognition-step",
                        bundle.recognition_verdicts.step_forward);
  r.checks.emplace_back("recognition-injective",
                        bundle.recognition_verdicts.injective);
  r.checks.emplace_back("recognition-bounded",
                        bundle.recognition_verdicts.bounded);
  r.checks.emplace_back("causal-unambiguous",
                        causal_verdict(idx, bundle.causal));
  r.checks.emplace_back("reproduction", check_reproduction(idx, graph, w));
  r.checks.emplace_back("fecundity",
                        check_fecundity(part, cfg.thresholds));
  r.checks.emplace_back(
      "preservation",
      check_preservation(idx, graph, bundle.recognition, cfg, w));
  r.checks.emplace_back(
      "heredity", heredity_aggregate(idx, graph, cfg, w, r.heredity_dims));
  r.checks.emplace_back("evolutionary-time-scale",
                        reproducing_set(idx, graph, chains, cfg, w).verdict);
  r.checks.emplace_back(
      "sorting", check_sorting(idx, graph, bundle.recognition, cfg, w));
  r.checks.emplace_back("heritable-variation",
                        heritable_variation(idx, graph, cfg, w).verdict);
  r.checks.emplace_back(
      "correlation",
      check_correlation(idx, graph, bundle.recognition, cfg, w));
  return r;
}

namespace {

void emit_verdict_machine(std::ostream& out, const std::string& name,
                          const Verdict& v) {
  out << "check." << name << " = " << to_string(v.status) << '\n';
  out << "check." << name << ".reason = " << v.reason << '\n';
  for (std::size_t i = 0; i < v.witnesses.size(); ++i) {
    out << "check." << name << ".witness." << i << " = " << v.witnesses[i]
        << '\n';
  }
  for (const auto& [k, val] : v.details) {
    out << "check." << name << "." << k << " = " << val << '\n';
  }
}

}  // namespace

void render_machine(std::ostream& out, const Report& r) {
  out << "format = alife-report/1\n";
  out << "model = " << r.model << '\n';
  out << "config_digest = " << r.config_digest << '\n';
  out << "window = " << r.window.first << ".." << r.window.last << '\n';
  out << "states = " << r.states << '\n';
  out << "instances = " << r.instances << '\n';
  out << "recognition_edges = " << r.recognition_edges << '\n';
  out << "causal_retained = " << r.causal_retained << '\n';
  out << "causal_dropped = " << r.causal_dropped << '\n';
  out << "ancestor_edges = " << r.ancestor_edges << '\n';
  out << "parent_edges = " << r.parent_edges << '\n';
  for (const auto& [name, v] : r.checks) emit_verdict_machine(out, name, v);
  for (const HeredityResult& h : r.heredity_dims) {
    out << "heredity." << h.dim << " = " << to_string(h.verdict.status)
        << '\n';
    out << "heredity." << h.dim << ".parent_pairs = " << h.parent_pairs
        << '\n';
    out << "heredity." << h.dim << ".inherited = " << h.inherited << '\n';
    if (h.inherited > 0) {
      std::ostringstream os;
      os << h.ratio;
      out << "heredity." << h.dim << ".ratio = " << os.str() << '\n';
    }
  }
}

void render_human(std::ostream& out, const Report& r) {
  out << "model " << r.model << ", states " << r.states << ", instances "
      << r.instances << ", window " << r.window.first << ".." << r.window.last
      << '\n';
  out << "relations: recognition " << r.recognition_edges << ", causal "
      << r.causal_retained << " (+" << r.causal_dropped << " dropped)"
      << ", ancestor " << r.ancestor_edges << ", parent " << r.parent_edges
      << '\n';
  out << '\n';
  for (const auto& [name, v] : r.checks) {
    out << "  " << name;
    for (std::size_t i = name.size(); i < 26; ++i) out << ' ';
    out << to_string(v.status) << "  -- " << v.reason << '\n';
    for (const std::string& wit : v.witnesses) {
      out << "      witness: " << wit << '\n';
    }
  }
  out << '\n';
  for (const HeredityResult& h : r.heredity_dims) {
    out << "  heredity[" << h.dim << "]: " << to_string(h.verdict.status)
        << " (pairs " << h.parent_pairs << ", inherited " << h.inherited;
    if (h.inherited > 0) out << ", ratio " << h.ratio;
    out << ")\n";
  }
}

bool any_violated(const Report& r, const std::vector<std::string>& requested) {
  if (requested.empty()) {
    for (const auto& [name, v] : r.checks) {
      if (v.status == Status::Violated) return true;
    }
    return false;
  }
  for (const std::string& name : requested) {
    const Verdict* v = r.find(name);
    if (v && v->status == Status::Violated) return true;
  }
  return false;
}

}  // namespace alife
