#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "coverify/rigor.hpp"

namespace coverify {

/// Initial stage: Shearer primes 4 < p < shearer_limit, window [222, 4000).
struct Stage1Config {
  int shearer_limit = 222;
  Interval beta2;  // claimed beta_2(1)
  Interval beta3;  // claimed beta_3(1)
  Interval M;
  int K = 100;
  Interval EG2;    // claimed bound on E ||G(0)||_2^2
  Interval EBop2;  // claimed bound on E B_op(M)^2
  Interval split2;
  Interval split_op;
  int omega_cutoff = 200;
  int exact_ej_max = 20;
  Interval beta2_next;  // claimed beta_2(2)
  Interval beta3_next;  // claimed beta_3(2)

  // Reference values compared against, never used by the argument.
  Interval ref_cap2;
  Interval ref_B2max;
  Interval ref_eps;
  std::vector<Interval> ref_table;
};

/// Uniform stage covering every window i >= 2.
struct AsymptoticConfig {
  Interval P;  // smallest window start
  Interval M;
  int K = 100;
  /// Bins i + j <= K + offset with B_op^2 cap (K + offset - i - j)/K.
  int bin_offset = 1;
  Interval prod;  // prod p/(p-1) over a window
  Interval c2;    // sum 1/(p-1)^2 <= c2 / (P log P)
  Interval c3;    // sum 1/(p-1)^3 <= c3 / (2 P^2 log P)
  Interval b2;    // beta_2(i) <= b2 (P_i log P_i)^{1/2}
  Interval b3;    // beta_3(i) <= b3 (2 P_i^2 log P_i)^{1/3}
  Interval EG3;
  Interval EG2;
  Interval EBop2;
  Interval split3;
  Interval split2;
  Interval split_op;
  int omega_cutoff = 200;
  Interval e1_tau2;
  Interval e1_tau3;
  Interval tau2_excess;  // sum tau_2 over a window <= 3 log(growth) + tau2_excess
  Interval tau3_excess;  // sum tau_3 over a window <= 7 log(growth) + tau3_excess
  Interval growth;       // P_{i+1} = P_i^growth
  Interval closure2;     // threshold below (P_{i+1} log P_{i+1})/(P_i log P_i)
  Interval closure3;     // threshold below (P_{i+1}^2 log P_{i+1})/(P_i^2 log P_i)

  Interval ref_curly_c;
  Interval ref_ES;
  Interval ref_cap3;
  Interval ref_B3max;
  Interval ref_cap2;
  Interval ref_eps;
  std::vector<Interval> ref_table;
  Interval ref_ratio2;
  Interval ref_ratio3;
};

struct Config {
  Interval pi_good_floor;
  Stage1Config stage1;
  AsymptoticConfig asym;
  /// Absolute slack for table rows against reference values.
  Interval table_slack;
  /// Relative slack for caps against reference values.
  Interval cap_slack;
  /// Sieve windows i = 2, 3 during prove.
  bool check_windows = true;
};

Config default_config();

/// Flat object: keys like "stage1.M" with decimal strings, integers, booleans
/// or arrays of decimal strings. Unknown keys raise ValidationError.
Config config_from_json(const nlohmann::json& j, Config base = default_config());
nlohmann::json config_to_json(const Config& c);
Config load_config(const std::string& path);

/// Interval <-> {"lo": "...", "hi": "..."} with shortest round-trip decimals.
nlohmann::json interval_json(const Interval& x);
Interval interval_from_json(const nlohmann::json& j);

}  // namespace coverify
