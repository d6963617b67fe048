#include "alife/trace.hpp"

#include <set>
#include <unordered_map>
#include <unordered_set>

namespace alife {

std::string to_string(const EntityRef& r) {
  return "s" + std::to_string(r.state_index) + "/" + r.local_id;
}

std::string tag_to_string(const Tag& t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ',';
    s += char_value_to_string(t[i]);
  }
  return s;
}

const EntitySnapshot* Trace::find(const EntityRef& r) const {
  for (const auto& st : states) {
    if (st.index != r.state_index) continue;
    for (const auto& e : st.entities)
      if (e.ref.local_id == r.local_id) return &e;
    return nullptr;
  }
  return nullptr;
}

ValidationReport validate_trace(const Trace& trace) {
  ValidationReport rep;
  auto issue = [&](std::string kind, std::uint32_t state, std::string detail) {
    rep.issues.push_back({std::move(kind), state, std::move(detail)});
  };

  std::uint32_t expected = trace.states.empty() ? 0 : trace.states[0].index;
  std::unordered_map<std::uint32_t, std::unordered_set<std::string>> ids;
  for (const auto& st : trace.states) {
    if (st.index != expected)
      issue("bad-index", st.index,
            "expected state index " + std::to_string(expected));
    expected = st.index + 1;

    std::set<std::string> tags;
    auto& idset = ids[st.index];
    for (const auto& e : st.entities) {
      if (e.ref.state_index != st.index)
        issue("bad-ref", st.index,
              "entity " + to_string(e.ref) + " carries wrong state index");
      if (!idset.insert(e.ref.local_id).second)
        issue("duplicate-tag", st.index,
              "duplicate id " + e.ref.local_id + " within state");
      if (!tags.insert(tag_to_string(e.tag)).second)
        issue("duplicate-tag", st.index,
              "duplicate tag " + tag_to_string(e.tag) + " within state");
      if (e.chars.size() != trace.schema.arity())
        issue("arity", st.index,
              "entity " + to_string(e.ref) + " has " +
                  std::to_string(e.chars.size()) + " chars, schema arity " +
                  std::to_string(trace.schema.arity()));
    }
  }

  for (const auto& st : trace.states) {
    for (const auto& ev : st.causes) {
      if (ev.child.state_index != st.index ||
          ev.parent.state_index + 1 != ev.child.state_index) {
        issue("event", st.index,
              "event " + to_string(ev.parent) + " -> " + to_string(ev.child) +
                  " does not span one step into this state");
        continue;
      }
      auto present = [&](const EntityRef& r) {
        auto it = ids.find(r.state_index);
        return it != ids.end() && it->second.count(r.local_id) > 0;
      };
      if (!present(ev.parent))
        issue("event", st.index,
              "event parent " + to_string(ev.parent) + " not in trace");
      if (!present(ev.child))
        issue("event", st.index,
              "event child " + to_string(ev.child) + " not in trace");
    }
  }
  return rep;
}

}  // namespace alife
