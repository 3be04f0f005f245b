#include "coverify/report.hpp"

#include "coverify/config.hpp"

namespace coverify::report {

using nlohmann::json;

namespace {

json intervals(const std::vector<Interval>& xs) {
  json a = json::array();
  for (const Interval& x : xs) a.push_back(interval_json(x));
  return a;
}

json checks_json(const std::vector<Check>& cs) {
  json a = json::array();
  for (const Check& c : cs) a.push_back(check_json(c));
  return a;
}

json bin_json(const stages::Bin& b) {
  json j;
  if (b.i > 0) {
    j["i"] = b.i;
    j["B3"] = interval_json(b.B3);
  }
  j["j"] = b.j;
  j["B2"] = interval_json(b.B2);
  j["Bop"] = interval_json(b.Bop);
  j["B_inf"] = interval_json(b.B_inf);
  j["B20"] = interval_json(b.B20);
  j["theta"] = interval_json(b.theta);
  j["condition"] = interval_json(b.condition);
  j["eps"] = interval_json(b.eps);
  j["ok"] = b.ok;
  return j;
}

json update_json(const stages::BiasUpdate& u) {
  return json{{"series", interval_json(u.series)},
              {"tail", interval_json(u.tail)},
              {"terms", u.terms},
              {"moment", interval_json(u.moment)},
              {"beta", interval_json(u.beta)}};
}

void collect_checks(const json& node, std::vector<json>& out) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items()) {
      if (key == "checks" && value.is_array()) {
        for (const auto& c : value) out.push_back(c);
      } else {
        collect_checks(value, out);
      }
    }
  } else if (node.is_array()) {
    for (const auto& v : node) collect_checks(v, out);
  }
}

}  // namespace

const char* version() { return "1.0.0"; }

json check_json(const Check& c) {
  json j{{"name", c.name},
         {"lhs", interval_json(c.lhs)},
         {"relation", c.relation},
         {"rhs", interval_json(c.rhs)},
         {"ok", c.ok},
         {"essential", c.essential}};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

Check check_from_json(const json& j) {
  try {
    Check c;
    c.name = j.at("name").get<std::string>();
    c.lhs = interval_from_json(j.at("lhs"));
    c.relation = j.at("relation").get<std::string>();
    c.rhs = interval_from_json(j.at("rhs"));
    c.ok = j.at("ok").get<bool>();
    c.essential = j.at("essential").get<bool>();
    if (j.contains("note")) c.note = j["note"].get<std::string>();
    return c;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed check: ") + e.what());
  }
}

json chain_json(const shearer::ChainCertificate& c) {
  json j;
  j["primes"] = c.primes.size();
  if (!c.primes.empty()) {
    j["first_prime"] = c.primes.front();
    j["last_prime"] = c.primes.back();
  }
  j["holds"] = c.holds;
  if (!c.holds) {
    j["fail_prime"] = c.fail_prime;
    j["reason"] = c.reason;
  }
  int exact = 0;
  for (bool b : c.exact_used) exact += b ? 1 : 0;
  j["exact_fallbacks"] = exact;
  if (!c.rho_chain.empty()) j["rho_last"] = interval_json(c.rho_chain.back());
  return j;
}

json window_json(const primes::WindowStats& w) {
  json j{{"stage", w.stage},
         {"lo", w.lo},
         {"hi", w.hi},
         {"count", w.count},
         {"prod_p_over_pm1", interval_json(w.prod_p_over_pm1)},
         {"sum_inv_sq", interval_json(w.sum_inv_sq)},
         {"sum_inv_cube", interval_json(w.sum_inv_cube)},
         {"sum_tau2", interval_json(w.sum_tau2)},
         {"sum_tau3", interval_json(w.sum_tau3)}};
  j["checks"] = checks_json(w.checks);
  return j;
}

json fixed_point_json(const lll::FixedPointCertificate& c) {
  json j{{"M", interval_json(c.M)},
         {"B_inf", interval_json(c.B_inf)},
         {"B20", interval_json(c.B_20)},
         {"B_op", interval_json(c.B_op)},
         {"theta", interval_json(c.theta)},
         {"condition", interval_json(c.condition)},
         {"eps_norm", interval_json(c.eps_norm)},
         {"condition_ok", c.condition_ok},
         {"S", intervals(c.S)},
         {"x0", intervals(c.x0)},
         {"has_fixed_point", c.has_fixed_point}};
  if (c.has_fixed_point) {
    json v = json::array();
    for (double x : c.x_verified) v.push_back(to_decimal(x));
    j["x_verified"] = v;
    j["x_fix"] = intervals(c.x_fix);
    j["iterations"] = c.iterations;
  }
  return j;
}

json expectations_json(const lll::ExpectationBounds& e) {
  return json{{"EG2", interval_json(e.EG2)},
              {"EG3", interval_json(e.EG3)},
              {"ES1", interval_json(e.ES1)},
              {"ESk", intervals(e.ESk)},
              {"curly_c", interval_json(e.curly_c)},
              {"ES", interval_json(e.ES)},
              {"ES_coarse", interval_json(e.ES_coarse)},
              {"EBop2", interval_json(e.EBop2)},
              {"EBop2_coarse", interval_json(e.EBop2_coarse)},
              {"series_terms", e.series_terms}};
}

json stage_json(const stages::StageCertificate& c, bool all_bins) {
  json j;
  j["name"] = c.name;
  j["ok"] = c.ok();
  j["expectations"] = expectations_json(c.expectations);
  j["markov_total"] = interval_json(c.markov_total);
  j["pi_good"] = interval_json(c.pi_good);
  if (c.cap3.hi() > 0) j["cap3"] = interval_json(c.cap3);
  j["cap2"] = interval_json(c.cap2);
  j["cap_op"] = interval_json(c.cap_op);
  j["eps_sup"] = interval_json(c.eps_sup);
  j["bin_count"] = c.bins.size();
  if (c.worst_bin >= 0) j["worst_bin"] = bin_json(c.bins[c.worst_bin]);
  json bins = json::array();
  int failing = 0;
  for (const stages::Bin& b : c.bins) {
    if (!b.ok) ++failing;
    if (all_bins || !b.ok) bins.push_back(bin_json(b));
  }
  j["failing_bins"] = failing;
  j[all_bins ? "bins" : "bins_failing"] = bins;
  if (!c.omega_table.rows.empty()) {
    j["omega_table"] = intervals(c.omega_table.rows);
    j["tail_slope"] = interval_json(c.omega_table.tail_slope);
    j["solver_nodes"] = c.solver_nodes;
    j["update_k2"] = update_json(c.update2);
    j["update_k3"] = update_json(c.update3);
  }
  j["checks"] = checks_json(c.checks);
  return j;
}

json proof_json(const stages::ProofResult& r, const ReportOptions& opts) {
  json j;
  j["schema"] = kSchema;
  j["version"] = version();
  j["verdict"] = r.proved ? "proved" : "not proved";
  if (!r.proved) j["failure"] = r.failure;
  j["config"] = config_to_json(r.config);
  json s1 = stage_json(r.stage1, true);
  s1["shearer_chain"] = chain_json(r.stage1_in.chain);
  s1["beta2_1"] = interval_json(r.stage1_in.beta2.beta);
  s1["beta3_1"] = interval_json(r.stage1_in.beta3.beta);
  s1["window"] = window_json(r.stage1_in.window);
  j["initial_stage"] = s1;
  j["uniform_stage"] = stage_json(r.asym, opts.all_bins);
  j["induction"] = json{{"ok", r.induction.ok()}, {"checks", checks_json(r.induction.checks)}};
  json ws = json::array();
  for (const auto& w : r.windows) ws.push_back(window_json(w));
  j["windows"] = ws;
  if (opts.timing) {
    json t = json::object();
    for (const auto& [name, secs] : r.timings) t[name] = secs;
    j["timing"] = t;
  }
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

Recheck recheck(const json& report) {
  if (!report.is_object() || report.value("schema", "") != kSchema) {
    throw ParseError(std::string("not a ") + kSchema + " document");
  }
  if (!report.contains("verdict") || !report["verdict"].is_string()) throw ParseError("report has no verdict");
  std::vector<json> raw;
  collect_checks(report, raw);
  Recheck out;
  for (const json& cj : raw) {
    Check c = check_from_json(cj);
    bool ok;
    try {
      ok = certify_relation(c.lhs, c.relation, c.rhs);
    } catch (const DomainError& e) {
      throw ParseError(std::string("check '") + c.name + "': " + e.what());
    }
    ++out.checks;
    if (ok != c.ok) ++out.mismatches;
    if (c.essential && !ok) {
      if (out.essential_failures == 0) out.first_failure = c.name;
      ++out.essential_failures;
    }
  }
  out.proved = out.essential_failures == 0 && out.mismatches == 0 && out.checks > 0;
  bool claimed = report["verdict"].get<std::string>() == "proved";
  out.verdict_consistent = claimed == out.proved;
  return out;
}

}  // namespace coverify::report
