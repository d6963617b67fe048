#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "alife/trace.hpp"

namespace alife {

// UTF-8, line-oriented: line 1 is the header record (format_version, model,
// schema, seed, config_digest); every further line is one state record
// (index, entities[{id,tag,chars}], causes[[ps,pid,cs,cid],...]). Numbers
// decimal, ids/tags exact strings.
struct TraceIoError : std::runtime_error {
  std::size_t line;
  TraceIoError(std::size_t line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg),
        line(line_) {}
};

void write_trace(std::ostream& out, const Trace& trace);
void write_trace_file(const std::string& path, const Trace& trace);
std::string trace_to_string(const Trace& trace);

Trace read_trace(std::istream& in);
Trace read_trace_file(const std::string& path);

std::string schema_to_json(const CharSpaceSchema& schema);
CharSpaceSchema schema_from_json(const std::string& text);

}  // namespace alife
