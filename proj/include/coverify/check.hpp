#pragma once

#include <string>
#include <vector>

#include "coverify/rigor.hpp"

namespace coverify {

/// One certified inequality `lhs relation rhs` recorded in certificates and reports.
struct Check {
  std::string name;
  Interval lhs;
  std::string relation;  // "<", "<=", ">", ">=", or "in" for containment
  Interval rhs;
  bool ok = false;
  /// Essential checks carry the logical argument; the others compare against
  /// reference values and do not affect the overall verdict.
  bool essential = true;
  std::string note;
};

/// Evaluates `lhs relation rhs` as a certified statement about every member.
bool certify_relation(const Interval& lhs, const std::string& relation, const Interval& rhs);

Check make_check(std::string name, const Interval& lhs, const std::string& relation, const Interval& rhs,
                 bool essential = true, std::string note = {});

bool all_essential_ok(const std::vector<Check>& checks);

/// First failing essential check, or nullptr.
const Check* first_essential_failure(const std::vector<Check>& checks);

}  // namespace coverify
