#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "alife/alchemy.hpp"
#include "alife/axioms.hpp"
#include "alife/cbs.hpp"
#include "alife/config.hpp"
#include "alife/langton.hpp"
#include "alife/oracle.hpp"
#include "alife/relations.hpp"
#include "alife/report.hpp"
#include "alife/synth.hpp"
#include "alife/trace_io.hpp"

namespace {

constexpr int kExitViolation = 1;
constexpr int kExitError = 2;

struct RunSpec {
  std::string model;
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> steps;
  std::optional<std::uint64_t> collisions;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> snapshot;
};

struct ObserveSpec {
  std::string trace_path;
  std::string observer_config_path;
  std::string format = "human";
  std::vector<std::string> axioms;
};

void reject_override(const std::optional<std::uint64_t>& flag,
                     const std::string& name, const std::string& model) {
  if (flag) {
    throw alife::ConfigError("--" + name + " does not apply to model " +
                             model);
  }
}

alife::Trace produce_trace(const RunSpec& spec) {
  std::map<std::string, std::string> kv;
  if (!spec.config_path.empty()) kv = alife::parse_kv_file(spec.config_path);

  const auto put = [&kv](const std::string& key,
                         const std::optional<std::uint64_t>& v) {
    if (v) kv[key] = std::to_string(*v);
  };

  if (spec.model == "cbs") {
    reject_override(spec.collisions, "collisions", spec.model);
    reject_override(spec.snapshot, "snapshot", spec.model);
    put("steps", spec.steps);
    put("seed", spec.seed);
    return alife::cbs_run(alife::cbs_config_from_kv(kv));
  }
  if (spec.model == "langton") {
    reject_override(spec.collisions, "collisions", spec.model);
    reject_override(spec.seed, "seed", spec.model);
    put("steps", spec.steps);
    put("snapshot", spec.snapshot);
    if (!kv.count("table")) kv["table"] = "data/langton/loops.table";
    if (!kv.count("cells")) kv["cells"] = "data/langton/loop86.cells";
    return alife::langton_run(alife::langton_config_from_kv(kv));
  }
  if (spec.model == "alchemy") {
    reject_override(spec.steps, "steps", spec.model);
    reject_override(spec.snapshot, "snapshot", spec.model);
    put("collisions", spec.collisions);
    put("seed", spec.seed);
    return alife::alchemy_run(alife::alchemy_config_from_kv(kv));
  }
  if (spec.model == "synth") {
    reject_override(spec.collisions, "collisions", spec.model);
    reject_override(spec.snapshot, "snapshot", spec.model);
    put("steps", spec.steps);
    const alife::PlantedPlan plan = alife::plan_from_kv(kv);
    return alife::synth_trace(plan, spec.seed.value_or(1));
  }
  throw alife::ConfigError("unknown model: " + spec.model);
}

int cmd_run(const RunSpec& spec) {
  alife::Trace trace = produce_trace(spec);
  const alife::ValidationReport vr = alife::validate_trace(trace);
  if (!vr.ok()) {
    std::ostringstream os;
    os << "generated trace fails validation: " << vr.issues[0].kind << " at "
       << "state " << vr.issues[0].state_index << " (" << vr.issues[0].detail
       << ")";
    throw std::runtime_error(os.str());
  }
  try {
    alife::write_trace_file(spec.out_path, trace);
  } catch (...) {
    std::remove(spec.out_path.c_str());
    throw;
  }
  std::size_t instances = 0, events = 0;
  for (const alife::State& st : trace.states) {
    instances += st.entities.size();
    events += st.causes.size();
  }
  std::cout << "model " << trace.meta.model << ", states "
            << trace.states.size() << ", instances " << instances
            << ", causal events " << events << '\n'
            << "wrote " << spec.out_path << '\n';
  return 0;
}

alife::ObserverConfig observer_for(const alife::Trace& trace,
                                   const std::string& config_path) {
  alife::ObserverConfig cfg =
      alife::default_observer(trace.meta.model, trace.schema);
  if (!config_path.empty()) {
    alife::apply_observer_overrides(cfg, alife::parse_kv_file(config_path));
  }
  return cfg;
}

void render_level0(std::ostream& out, const alife::Level0Report& lv,
                   const std::string& format) {
  if (format == "machine") {
    out << "level0.self_copiers = " << lv.self_copiers.size() << '\n';
    for (std::size_t i = 0; i < lv.self_copiers.size(); ++i) {
      out << "level0.self_copiers." << i << " = " << lv.self_copiers[i]
          << '\n';
    }
    out << "level0.hypercycles = " << lv.hypercycles.size() << '\n';
    for (std::size_t i = 0; i < lv.hypercycles.size(); ++i) {
      out << "level0.hypercycle." << i << " =";
      for (const std::string& c : lv.hypercycles[i]) out << ' ' << c;
      out << '\n';
    }
    return;
  }
  out << "level-0 organization:\n  self-copiers (" << lv.self_copiers.size()
      << "):";
  for (const std::string& c : lv.self_copiers) out << "  " << c;
  out << '\n';
  out << "  hypercycles (" << lv.hypercycles.size() << "):";
  for (const auto& cyc : lv.hypercycles) {
    out << "  {";
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      if (i) out << ", ";
      out << cyc[i];
    }
    out << '}';
  }
  out << '\n';
}

int cmd_observe(const ObserveSpec& spec) {
  const alife::Trace trace = alife::read_trace_file(spec.trace_path);
  for (const std::string& name : spec.axioms) {
    if (!alife::is_check_name(name)) {
      throw alife::ConfigError("unknown axiom check: " + name);
    }
  }
  const alife::ObserverConfig cfg =
      observer_for(trace, spec.observer_config_path);
  const alife::RelationBundle bundle(trace, cfg);
  const alife::Report report = alife::full_report(trace, bundle, cfg);
  if (spec.format == "machine") {
    alife::render_machine(std::cout, report);
  } else {
    alife::render_human(std::cout, report);
  }
  if (trace.meta.model == "alchemy") {
    render_level0(std::cout, alife::detect_level0(trace, bundle), spec.format);
  }
  return alife::any_violated(report, spec.axioms) ? kExitViolation : 0;
}

int cmd_dump(const std::string& trace_path, std::uint64_t state_index) {
  const alife::Trace trace = alife::read_trace_file(trace_path);
  const alife::State* state = nullptr;
  for (const alife::State& st : trace.states) {
    if (st.index == state_index) {
      state = &st;
      break;
    }
  }
  if (!state) {
    throw std::runtime_error("trace has no state " +
                             std::to_string(state_index));
  }
  if (trace.meta.model == "langton") {
    std::cout << alife::render_grid(alife::grid_from_state(*state));
    return 0;
  }
  if (trace.meta.model == "alchemy") {
    for (const alife::EntitySnapshot& e : state->entities) {
      std::cout << "⟨" << alife::tag_to_string(e.tag) << "⟩ "
                << std::get<std::string>(e.chars.at(0)) << '\n';
    }
    return 0;
  }
  if (trace.meta.model == "cbs") {
    for (const alife::EntitySnapshot& e : state->entities) {
      std::string bits;
      for (const alife::CharValue& v : e.chars) {
        bits += std::get<std::int64_t>(v) ? '1' : '0';
      }
      std::cout << bits << '\n';
    }
    return 0;
  }
  for (const alife::EntitySnapshot& e : state->entities) {
    std::cout << e.ref.local_id;
    for (const alife::CharValue& v : e.chars) {
      std::cout << ' ' << alife::char_value_to_string(v);
    }
    std::cout << '\n';
  }
  return 0;
}

int cmd_synth(const std::string& plan_path, std::uint64_t seed,
              const std::string& out_path) {
  const alife::PlantedPlan plan = alife::plan_from_file(plan_path);
  const alife::Trace trace = alife::synth_trace(plan, seed);
  try {
    alife::write_trace_file(out_path, trace);
  } catch (...) {
    std::remove(out_path.c_str());
    throw;
  }
  std::cout << "model synth, states " << trace.states.size() << ", wrote "
            << out_path << '\n';
  return 0;
}

int cmd_oracle_check(const std::string& trace_path,
                     const std::string& observer_config_path) {
  const alife::Trace trace = alife::read_trace_file(trace_path);
  const alife::ObserverConfig cfg = observer_for(trace, observer_config_path);
  const alife::RelationBundle bundle(trace, cfg);
  // The oracle intersects with a materialized delta, so rebuild it densely.
  const alife::DeltaRelation dense =
      alife::build_delta(bundle.idx, cfg, /*materialize=*/true);
  const alife::oracle::BruteAncestry brute = alife::oracle::brute_ancestor_of(
      bundle.idx, bundle.recognition, bundle.causal, dense);

  const auto mismatch = [](const std::vector<alife::Edge>& fast,
                           const std::vector<alife::Edge>& slow) {
    return fast != slow;
  };
  const bool anc_bad = mismatch(bundle.graph.ancestor, brute.ancestor);
  const bool par_bad = mismatch(bundle.graph.parent, brute.parent);
  std::cout << "ancestor edges: fast " << bundle.graph.ancestor.size()
            << ", oracle " << brute.ancestor.size()
            << (anc_bad ? " MISMATCH" : " ok") << '\n';
  std::cout << "parent edges: fast " << bundle.graph.parent.size()
            << ", oracle " << brute.parent.size()
            << (par_bad ? " MISMATCH" : " ok") << '\n';
  return (anc_bad || par_bad) ? kExitViolation : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"artificial-life model runner and trace observer"};
  app.require_subcommand(1);

  RunSpec run_spec;
  CLI::App* run = app.add_subcommand(
      "run", "Run a model and write its observation trace");
  run->add_option("--model", run_spec.model, "cbs | langton | alchemy | synth")
      ->required();
  run->add_option("--config", run_spec.config_path,
                  "key=value model config file");
  run->add_option("--out", run_spec.out_path, "output trace path")->required();
  run->add_option("--steps", run_spec.steps, "step-count override");
  run->add_option("--collisions", run_spec.collisions,
                  "collision-count override (alchemy)");
  run->add_option("--seed", run_spec.seed, "seed override");
  run->add_option("--snapshot", run_spec.snapshot,
                  "snapshot interval override (langton)");

  ObserveSpec obs_spec;
  CLI::App* observe = app.add_subcommand(
      "observe", "Check the axiom suite against a trace and print a report");
  observe->add_option("--trace", obs_spec.trace_path, "trace file")
      ->required();
  observe->add_option("--observer-config", obs_spec.observer_config_path,
                      "observer override file (bounds, window, thresholds)");
  observe->add_option("--format", obs_spec.format, "human | machine")
      ->check(CLI::IsMember({"human", "machine"}));
  observe
      ->add_option("--axioms", obs_spec.axioms,
                   "checks gating the exit status (default: all)")
      ->delimiter(',');

  std::string dump_trace;
  std::uint64_t dump_state = 0;
  CLI::App* dump =
      app.add_subcommand("dump", "Render one observed state as text");
  dump->add_option("--trace", dump_trace, "trace file")->required();
  dump->add_option("--state", dump_state, "state index")->required();

  std::string synth_plan, synth_out;
  std::uint64_t synth_seed = 1;
  CLI::App* synth = app.add_subcommand(
      "synth", "Generate a planted synthetic trace from a plan");
  synth->add_option("--plan", synth_plan, "plan file")->required();
  synth->add_option("--seed", synth_seed, "generation seed");
  synth->add_option("--out", synth_out, "output trace path")->required();

  std::string oracle_trace, oracle_cfg;
  CLI::App* oracle = app.add_subcommand(
      "oracle-check",
      "Compare fast ancestry relations against the brute-force oracle");
  oracle->add_option("--trace", oracle_trace, "trace file")->required();
  oracle->add_option("--observer-config", oracle_cfg,
                     "observer override file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_spec);
    if (observe->parsed()) return cmd_observe(obs_spec);
    if (dump->parsed()) return cmd_dump(dump_trace, dump_state);
    if (synth->parsed()) return cmd_synth(synth_plan, synth_seed, synth_out);
    if (oracle->parsed()) return cmd_oracle_check(oracle_trace, oracle_cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
