#include "alife/trace_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace alife {

namespace {

using nlohmann::json;

json value_to_json(const CharValue& v) {
  if (std::holds_alternative<std::int64_t>(v))
    return std::get<std::int64_t>(v);
  return std::get<std::string>(v);
}

CharValue value_from_json(const json& j, std::size_t line) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_string()) return j.get<std::string>();
  throw TraceIoError(line, "value must be integer or string");
}

json schema_json(const CharSpaceSchema& s) {
  json dims = json::array();
  for (const auto& d : s.dims) {
    dims.push_back({{"name", d.name},
                    {"kind", d.kind == DimKind::Int ? "int" : "str"},
                    {"char_ordered", d.char_ordered},
                    {"diff_ordered", d.diff_ordered}});
  }
  return json{{"dims", dims}};
}

CharSpaceSchema schema_from(const json& j, std::size_t line) {
  if (!j.is_object() || !j.contains("dims") || !j["dims"].is_array())
    throw TraceIoError(line, "schema must be an object with a dims array");
  CharSpaceSchema s;
  for (const auto& d : j["dims"]) {
    DimSpec spec;
    spec.name = d.at("name").get<std::string>();
    std::string kind = d.at("kind").get<std::string>();
    if (kind == "int")
      spec.kind = DimKind::Int;
    else if (kind == "str")
      spec.kind = DimKind::Str;
    else
      throw TraceIoError(line, "unknown dim kind: " + kind);
    spec.char_ordered = d.at("char_ordered").get<bool>();
    spec.diff_ordered = d.at("diff_ordered").get<bool>();
    s.dims.push_back(std::move(spec));
  }
  return s;
}

json state_json(const State& st) {
  json entities = json::array();
  for (const auto& e : st.entities) {
    json tag = json::array();
    for (const auto& v : e.tag) tag.push_back(value_to_json(v));
    json chars = json::array();
    for (const auto& v : e.chars) chars.push_back(value_to_json(v));
    entities.push_back(
        {{"id", e.ref.local_id}, {"tag", tag}, {"chars", chars}});
  }
  json causes = json::array();
  for (const auto& ev : st.causes) {
    causes.push_back(json::array({ev.parent.state_index, ev.parent.local_id,
                                  ev.child.state_index, ev.child.local_id}));
  }
  return json{{"index", st.index}, {"entities", entities}, {"causes", causes}};
}

}  // namespace

std::string schema_to_json(const CharSpaceSchema& schema) {
  return schema_json(schema).dump();
}

CharSpaceSchema schema_from_json(const std::string& text) {
  return schema_from(json::parse(text), 0);
}

void write_trace(std::ostream& out, const Trace& trace) {
  json header{{"format_version", trace.meta.format_version},
              {"model", trace.meta.model},
              {"schema", schema_json(trace.schema)},
              {"seed", trace.meta.seed},
              {"config_digest", trace.meta.config_digest}};
  out << header.dump() << '\n';
  for (const auto& st : trace.states) out << state_json(st).dump() << '\n';
}

void write_trace_file(const std::string& path, const Trace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_trace(out, trace);
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string trace_to_string(const Trace& trace) {
  std::ostringstream os;
  write_trace(os, trace);
  return os.str();
}

Trace read_trace(std::istream& in) {
  Trace trace;
  std::string line;
  std::size_t lineno = 0;

  if (!std::getline(in, line)) throw TraceIoError(1, "empty trace: no header");
  ++lineno;
  json header;
  try {
    header = json::parse(line);
  } catch (const json::parse_error& e) {
    throw TraceIoError(lineno, std::string("malformed header: ") + e.what());
  }
  if (!header.is_object()) throw TraceIoError(lineno, "header must be object");
  try {
    trace.meta.format_version = header.at("format_version").get<int>();
    if (trace.meta.format_version != 1)
      throw TraceIoError(lineno,
                         "unsupported format_version " +
                             std::to_string(trace.meta.format_version));
    trace.meta.model = header.at("model").get<std::string>();
    trace.meta.seed = header.at("seed").get<std::uint64_t>();
    trace.meta.config_digest = header.at("config_digest").get<std::string>();
    trace.schema = schema_from(header.at("schema"), lineno);
  } catch (const json::exception& e) {
    throw TraceIoError(lineno, std::string("bad header field: ") + e.what());
  }

  bool have_index = false;
  std::uint32_t last_index = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw TraceIoError(lineno,
                         std::string("malformed state record: ") + e.what());
    }
    State st;
    try {
      st.index = j.at("index").get<std::uint32_t>();
      if (have_index && st.index <= last_index)
        throw TraceIoError(lineno, "duplicate or non-increasing state index " +
                                       std::to_string(st.index));
      have_index = true;
      last_index = st.index;
      for (const auto& je : j.at("entities")) {
        EntitySnapshot e;
        e.ref.state_index = st.index;
        e.ref.local_id = je.at("id").get<std::string>();
        for (const auto& jv : je.at("tag"))
          e.tag.push_back(value_from_json(jv, lineno));
        for (const auto& jv : je.at("chars"))
          e.chars.push_back(value_from_json(jv, lineno));
        st.entities.push_back(std::move(e));
      }
      for (const auto& jc : j.at("causes")) {
        if (!jc.is_array() || jc.size() != 4)
          throw TraceIoError(lineno, "cause record must be a 4-element array");
        CausalEvent ev;
        ev.parent.state_index = jc[0].get<std::uint32_t>();
        ev.parent.local_id = jc[1].get<std::string>();
        ev.child.state_index = jc[2].get<std::uint32_t>();
        ev.child.local_id = jc[3].get<std::string>();
        st.causes.push_back(std::move(ev));
      }
    } catch (const json::exception& e) {
      throw TraceIoError(lineno, std::string("bad state record: ") + e.what());
    }
    trace.states.push_back(std::move(st));
  }
  return trace;
}

Trace read_trace_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open trace: " + path);
  return read_trace(in);
}

}  // namespace alife
