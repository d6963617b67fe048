#pragma once

#include <map>
#include <string>
#include <vector>

namespace alife {

enum class Status { Satisfied, Violated, Undetermined };

const char* to_string(Status s);

// Three-valued check result with supporting evidence. Undetermined means the
// trace cannot witness the property either way (too short, empty sets,
// thresholds unmet), and the reason says which precondition failed.
struct Verdict {
  Status status = Status::Undetermined;
  std::string reason;
  std::vector<std::string> witnesses;
  std::map<std::string, std::string> details;  // sorted for stable output
};

Verdict satisfied(std::string reason);
Verdict violated(std::string reason);
Verdict undetermined(std::string reason);

}  // namespace alife
