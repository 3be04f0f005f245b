#include <doctest.h>

#include "coverify/config.hpp"
#include "coverify/report.hpp"
#include "coverify/stages.hpp"

using namespace coverify;
using nlohmann::json;

namespace {

Config fast(Config c) {
  c.check_windows = false;
  return c;
}

Config corrected() {
  Config c = default_config();
  c.asym.M = Interval::decimal("2.98");
  c.asym.EBop2 = Interval::decimal("0.0005131748");
  c.asym.bin_offset = 2;
  return fast(c);
}

json* find_check(json& node, const std::string& needle) {
  if (node.is_object()) {
    if (node.contains("name") && node.contains("relation") && node["name"].get<std::string>().find(needle) != std::string::npos) {
      return &node;
    }
    for (auto& [k, v] : node.items()) {
      if (json* r = find_check(v, needle)) return r;
    }
  } else if (node.is_array()) {
    for (auto& v : node) {
      if (json* r = find_check(v, needle)) return r;
    }
  }
  return nullptr;
}

}  // namespace

TEST_CASE("configuration round trip") {
  Config c = default_config();
  json j = config_to_json(c);
  CHECK(j["schema"] == "coverify-config/1");
  Config back = config_from_json(j);
  CHECK(config_to_json(back) == j);
  CHECK(back.asym.M == c.asym.M);
  CHECK(back.stage1.ref_table.size() == c.stage1.ref_table.size());
  CHECK(back.asym.bin_offset == 1);
}

TEST_CASE("configuration overrides and validation") {
  Config c = config_from_json(json{{"asym.M", "2.98"}, {"asym.bin_offset", 2}, {"stage1.K", 50}});
  CHECK(c.asym.M == Interval::decimal("2.98"));
  CHECK(c.asym.bin_offset == 2);
  CHECK(c.stage1.K == 50);
  Config range = config_from_json(json{{"asym.M", json{{"lo", "2.5"}, {"hi", "2.75"}}}});
  CHECK(range.asym.M == Interval(2.5, 2.75));
  CHECK_THROWS_AS(config_from_json(json{{"asym.unknown", "1"}}), ValidationError);
  CHECK_THROWS_AS(config_from_json(json{{"asym.K", 0}}), ValidationError);
  CHECK_THROWS_AS(config_from_json(json{{"asym.bin_offset", 5}}), ValidationError);
  CHECK_THROWS_AS(config_from_json(json{{"pi_good_floor", "1.5"}}), ValidationError);
  CHECK_THROWS_AS(config_from_json(json{{"asym.M", "abc"}}), ParseError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), IoError);
}

TEST_CASE("interval serialization is exact") {
  Interval x = Interval::decimal("0.1");
  json j = interval_json(x);
  CHECK(interval_from_json(j) == x);
  CHECK_THROWS(interval_from_json(json{{"lo", "0.1000000000000000000001"}, {"hi", "0.2"}}));
}

TEST_CASE("report of the default constants re-checks as not proved") {
  stages::ProofResult r = stages::run_proof(fast(default_config()));
  CHECK_FALSE(r.proved);
  CHECK(r.failure.find("i=31, j=69") != std::string::npos);
  json rep = report::proof_json(r);
  CHECK(rep["verdict"] == "not proved");
  report::Recheck rc = report::recheck(rep);
  CHECK(rc.checks > 20);
  CHECK(rc.mismatches == 0);
  CHECK(rc.essential_failures == 1);
  CHECK_FALSE(rc.proved);
  CHECK(rc.verdict_consistent);
  CHECK(report::dump(report::proof_json(stages::run_proof(fast(default_config())))) == report::dump(rep));
}

TEST_CASE("corrected report re-checks and detects tampering") {
  stages::ProofResult r = stages::run_proof(corrected());
  REQUIRE(r.proved);
  json rep = report::proof_json(r);
  report::Recheck rc = report::recheck(rep);
  CHECK(rc.proved);
  CHECK(rc.verdict_consistent);

  json tampered = rep;
  json* c = find_check(tampered, "worst bin");
  REQUIRE(c != nullptr);
  (*c)["lhs"] = interval_json(Interval(3.5));
  report::Recheck t1 = report::recheck(tampered);
  CHECK(t1.mismatches == 1);
  CHECK_FALSE(t1.proved);
  CHECK_FALSE(t1.verdict_consistent);

  json flipped = rep;
  flipped["verdict"] = "not proved";
  CHECK_FALSE(report::recheck(flipped).verdict_consistent);

  CHECK_THROWS_AS(report::recheck(json{{"schema", "other"}}), ParseError);
}
