#include "coverify/check.hpp"

namespace coverify {

bool certify_relation(const Interval& lhs, const std::string& relation, const Interval& rhs) {
  if (relation == "<") return lhs.certainly_lt(rhs);
  if (relation == "<=") return lhs.certainly_le(rhs);
  if (relation == ">") return lhs.certainly_gt(rhs);
  if (relation == ">=") return lhs.certainly_ge(rhs);
  if (relation == "in") return lhs.lo() >= rhs.lo() && lhs.hi() <= rhs.hi();
  throw DomainError("unknown relation '" + relation + "'");
}

Check make_check(std::string name, const Interval& lhs, const std::string& relation, const Interval& rhs,
                 bool essential, std::string note) {
  Check c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.relation = relation;
  c.rhs = rhs;
  c.ok = certify_relation(lhs, relation, rhs);
  c.essential = essential;
  c.note = std::move(note);
  return c;
}

bool all_essential_ok(const std::vector<Check>& checks) { return first_essential_failure(checks) == nullptr; }

const Check* first_essential_failure(const std::vector<Check>& checks) {
  for (const Check& c : checks) {
    if (c.essential && !c.ok) return &c;
  }
  return nullptr;
}

}  // namespace coverify
