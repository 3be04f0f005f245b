#pragma once

#include <string>

#include <json.hpp>

#include "coverify/check.hpp"
#include "coverify/locallemma.hpp"
#include "coverify/primes.hpp"
#include "coverify/shearer.hpp"
#include "coverify/stages.hpp"

namespace coverify::report {

inline constexpr const char* kSchema = "coverify-report/1";
const char* version();

nlohmann::json check_json(const Check& c);
Check check_from_json(const nlohmann::json& j);

nlohmann::json chain_json(const shearer::ChainCertificate& c);
nlohmann::json window_json(const primes::WindowStats& w);
nlohmann::json fixed_point_json(const lll::FixedPointCertificate& c);
nlohmann::json expectations_json(const lll::ExpectationBounds& e);
nlohmann::json stage_json(const stages::StageCertificate& c, bool all_bins);

struct ReportOptions {
  bool timing = false;
  /// Include every bin of the uniform stage (several thousand entries).
  bool all_bins = false;
};

nlohmann::json proof_json(const stages::ProofResult& r, const ReportOptions& opts = {});

/// Serialized with two-space indentation and a trailing newline.
std::string dump(const nlohmann::json& j);

struct Recheck {
  int checks = 0;
  int essential_failures = 0;
  /// Checks whose recorded verdict disagrees with re-evaluation.
  int mismatches = 0;
  bool verdict_consistent = false;
  bool proved = false;
  std::string first_failure;
};

/// Re-evaluates every recorded check of a proof report from its stored
/// enclosures and confirms the overall verdict. Throws ParseError on a
/// malformed report.
Recheck recheck(const nlohmann::json& report);

}  // namespace coverify::report
