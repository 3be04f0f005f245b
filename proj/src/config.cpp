#include "coverify/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

namespace coverify {

namespace {

Interval d(const char* s) { return Interval::decimal(s); }

std::vector<Interval> decimals(std::initializer_list<const char*> xs) {
  std::vector<Interval> out;
  for (const char* s : xs) out.push_back(d(s));
  return out;
}

// Shortest decimal literal whose tightest enclosure is exactly x.
std::string literal_of(const Interval& x) {
  if (x.is_point()) return to_decimal(x.lo());
  char buf[64];
  for (int digits = 1; digits <= 40; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, x.mid());
    if (Interval::decimal(buf) == x) return buf;
  }
  return {};
}

nlohmann::json interval_value(const Interval& x) {
  std::string s = literal_of(x);
  if (!s.empty()) return s;
  return interval_json(x);
}

Interval parse_interval_value(const std::string& key, const nlohmann::json& v) {
  if (v.is_string()) return Interval::decimal(v.get<std::string>());
  if (v.is_number_integer()) return Interval::decimal(std::to_string(v.get<long long>()));
  if (v.is_number_float()) return Interval::decimal(to_decimal(v.get<double>()));
  if (v.is_object()) return interval_from_json(v);
  throw ValidationError("config key " + key + " expects a decimal string");
}

struct Field {
  std::string key;
  std::function<nlohmann::json(const Config&)> get;
  std::function<void(Config&, const nlohmann::json&)> set;
};

Field interval_field(std::string key, Interval Config::*outer) {
  return {key, [outer](const Config& c) { return interval_value(c.*outer); },
          [outer, key](Config& c, const nlohmann::json& v) { c.*outer = parse_interval_value(key, v); }};
}

template <class Sub>
Field interval_field(std::string key, Sub Config::*sub, Interval Sub::*member) {
  return {key, [sub, member](const Config& c) { return interval_value(c.*sub.*member); },
          [sub, member, key](Config& c, const nlohmann::json& v) { c.*sub.*member = parse_interval_value(key, v); }};
}

template <class Sub>
Field int_field(std::string key, Sub Config::*sub, int Sub::*member) {
  return {key, [sub, member](const Config& c) { return nlohmann::json(c.*sub.*member); },
          [sub, member, key](Config& c, const nlohmann::json& v) {
            if (!v.is_number_integer()) throw ValidationError("config key " + key + " expects an integer");
            c.*sub.*member = v.get<int>();
          }};
}

template <class Sub>
Field list_field(std::string key, Sub Config::*sub, std::vector<Interval> Sub::*member) {
  return {key,
          [sub, member](const Config& c) {
            nlohmann::json a = nlohmann::json::array();
            for (const Interval& x : c.*sub.*member) a.push_back(interval_value(x));
            return a;
          },
          [sub, member, key](Config& c, const nlohmann::json& v) {
            if (!v.is_array()) throw ValidationError("config key " + key + " expects an array");
            std::vector<Interval> xs;
            for (const auto& e : v) xs.push_back(parse_interval_value(key, e));
            c.*sub.*member = xs;
          }};
}

const std::vector<Field>& fields() {
  using S1 = Stage1Config;
  using A = AsymptoticConfig;
  static const std::vector<Field> f = {
      interval_field("pi_good_floor", &Config::pi_good_floor),
      interval_field("tolerance.table_abs", &Config::table_slack),
      interval_field("tolerance.cap_rel", &Config::cap_slack),
      {"windows.check", [](const Config& c) { return nlohmann::json(c.check_windows); },
       [](Config& c, const nlohmann::json& v) {
         if (!v.is_boolean()) throw ValidationError("config key windows.check expects a boolean");
         c.check_windows = v.get<bool>();
       }},
      int_field("stage1.shearer_limit", &Config::stage1, &S1::shearer_limit),
      interval_field("stage1.beta2", &Config::stage1, &S1::beta2),
      interval_field("stage1.beta3", &Config::stage1, &S1::beta3),
      interval_field("stage1.M", &Config::stage1, &S1::M),
      int_field("stage1.K", &Config::stage1, &S1::K),
      interval_field("stage1.EG2", &Config::stage1, &S1::EG2),
      interval_field("stage1.EBop2", &Config::stage1, &S1::EBop2),
      interval_field("stage1.split2", &Config::stage1, &S1::split2),
      interval_field("stage1.split_op", &Config::stage1, &S1::split_op),
      int_field("stage1.omega_cutoff", &Config::stage1, &S1::omega_cutoff),
      int_field("stage1.exact_ej_max", &Config::stage1, &S1::exact_ej_max),
      interval_field("stage1.beta2_next", &Config::stage1, &S1::beta2_next),
      interval_field("stage1.beta3_next", &Config::stage1, &S1::beta3_next),
      interval_field("stage1.ref.cap2", &Config::stage1, &S1::ref_cap2),
      interval_field("stage1.ref.B2max", &Config::stage1, &S1::ref_B2max),
      interval_field("stage1.ref.eps", &Config::stage1, &S1::ref_eps),
      list_field("stage1.ref.table", &Config::stage1, &S1::ref_table),
      interval_field("asym.P", &Config::asym, &A::P),
      interval_field("asym.M", &Config::asym, &A::M),
      int_field("asym.K", &Config::asym, &A::K),
      int_field("asym.bin_offset", &Config::asym, &A::bin_offset),
      interval_field("asym.prod", &Config::asym, &A::prod),
      interval_field("asym.c2", &Config::asym, &A::c2),
      interval_field("asym.c3", &Config::asym, &A::c3),
      interval_field("asym.b2", &Config::asym, &A::b2),
      interval_field("asym.b3", &Config::asym, &A::b3),
      interval_field("asym.EG3", &Config::asym, &A::EG3),
      interval_field("asym.EG2", &Config::asym, &A::EG2),
      interval_field("asym.EBop2", &Config::asym, &A::EBop2),
      interval_field("asym.split3", &Config::asym, &A::split3),
      interval_field("asym.split2", &Config::asym, &A::split2),
      interval_field("asym.split_op", &Config::asym, &A::split_op),
      int_field("asym.omega_cutoff", &Config::asym, &A::omega_cutoff),
      interval_field("asym.e1_tau2", &Config::asym, &A::e1_tau2),
      interval_field("asym.e1_tau3", &Config::asym, &A::e1_tau3),
      interval_field("asym.tau2_excess", &Config::asym, &A::tau2_excess),
      interval_field("asym.tau3_excess", &Config::asym, &A::tau3_excess),
      interval_field("asym.growth", &Config::asym, &A::growth),
      interval_field("asym.closure2", &Config::asym, &A::closure2),
      interval_field("asym.closure3", &Config::asym, &A::closure3),
      interval_field("asym.ref.curly_c", &Config::asym, &A::ref_curly_c),
      interval_field("asym.ref.ES", &Config::asym, &A::ref_ES),
      interval_field("asym.ref.cap3", &Config::asym, &A::ref_cap3),
      interval_field("asym.ref.B3max", &Config::asym, &A::ref_B3max),
      interval_field("asym.ref.cap2", &Config::asym, &A::ref_cap2),
      interval_field("asym.ref.eps", &Config::asym, &A::ref_eps),
      list_field("asym.ref.table", &Config::asym, &A::ref_table),
      interval_field("asym.ref.ratio2", &Config::asym, &A::ref_ratio2),
      interval_field("asym.ref.ratio3", &Config::asym, &A::ref_ratio3),
  };
  return f;
}

void validate(const Config& c) {
  auto positive_int = [](int v, const char* key) {
    if (v <= 0) throw ValidationError(std::string("config key ") + key + " must be positive");
  };
  positive_int(c.stage1.K, "stage1.K");
  positive_int(c.asym.K, "asym.K");
  positive_int(c.stage1.omega_cutoff, "stage1.omega_cutoff");
  positive_int(c.asym.omega_cutoff, "asym.omega_cutoff");
  if (c.stage1.exact_ej_max < 1) throw ValidationError("config key stage1.exact_ej_max must be positive");
  if (c.stage1.shearer_limit < 6) throw ValidationError("config key stage1.shearer_limit must be at least 6");
  if (c.asym.bin_offset < 0 || c.asym.bin_offset > 2) throw ValidationError("config key asym.bin_offset must be 0, 1 or 2");
  if (!(c.pi_good_floor.lo() > 0 && c.pi_good_floor.hi() < 1)) {
    throw ValidationError("config key pi_good_floor must lie in (0, 1)");
  }
}

}  // namespace

nlohmann::json interval_json(const Interval& x) {
  return nlohmann::json{{"lo", to_decimal(x.lo())}, {"hi", to_decimal(x.hi())}};
}

Interval interval_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("lo") || !j.contains("hi") || !j["lo"].is_string() || !j["hi"].is_string()) {
    throw ParseError("interval must be {\"lo\": \"...\", \"hi\": \"...\"}");
  }
  std::string lo = j["lo"].get<std::string>();
  std::string hi = j["hi"].get<std::string>();
  // Each endpoint is the shortest round-trip rendering of a double.
  auto endpoint = [](const std::string& t) {
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) {
      throw ParseError("bad interval endpoint '" + t + "'");
    }
    if (to_decimal(v) != t && !Interval::decimal(t).is_point()) {
      throw ParseError("interval endpoint '" + t + "' is not a double");
    }
    return v;
  };
  double a = endpoint(lo), b = endpoint(hi);
  if (!(a <= b)) throw ParseError("interval endpoints out of order");
  return Interval(a, b);
}

Config default_config() {
  Config c;
  c.pi_good_floor = d("0.3");
  c.table_slack = d("1e-9");
  c.cap_slack = d("1e-9");

  Stage1Config& s = c.stage1;
  s.beta2 = d("12.25");
  s.beta3 = d("25");
  s.M = d("1.769746269");
  s.EG2 = d("0.246514091");
  s.EBop2 = d("0.002220166");
  s.split2 = d("0.9");
  s.split_op = d("0.1");
  s.beta2_next = d("94.66051416");
  s.beta3_next = d("199.2834489");
  s.ref_cap2 = d("0.391292208");
  s.ref_B2max = d("0.625533539");
  s.ref_eps = d("0.292129153");
  s.ref_table = decimals({"1.769746269", "1.900670975", "2.033321919", "2.184489901", "2.363269323", "2.530235874",
                          "2.686345986", "2.833661687", "2.973253326", "3.106051540"});

  AsymptoticConfig& a = c.asym;
  a.P = d("4000");
  a.M = d("2.949873427");
  a.prod = d("1.506318");
  a.c2 = d("1.002631");
  a.c3 = d("1.004382");
  a.b2 = d("0.5197033883");
  a.b3 = d("0.3100980448");
  a.EG3 = d("0.1023637064");
  a.EG2 = d("0.6144485964");
  a.EBop2 = d("0.0005048197920");
  a.split3 = d("0.7");
  a.split2 = d("0.2");
  a.split_op = d("0.1");
  a.e1_tau2 = d("1.21974");
  a.e1_tau3 = d("2.84605");
  a.tau2_excess = d("0.00334");
  a.tau3_excess = d("0.00779");
  a.growth = d("1.5");
  a.closure2 = d("94");
  a.closure3 = d("6000");
  a.ref_curly_c = d("0.0001571422884");
  a.ref_ES = d("3.212501212");
  a.ref_cap3 = d("0.2089055233");
  a.ref_B3max = d("0.5933577790");
  a.ref_cap2 = d("4.388918546");
  a.ref_eps = d("0.190000303");
  a.ref_table = decimals({"1.459164221", "1.780349459", "2.096937862", "2.387653719", "2.656941273", "2.909180305",
                          "3.147611526", "3.374605257", "3.591932780", "3.800951606"});
  a.ref_ratio2 = d("48.515");
  a.ref_ratio3 = d("487.17");
  return c;
}

Config config_from_json(const nlohmann::json& j, Config base) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "schema") continue;
    bool found = false;
    for (const Field& f : fields()) {
      if (f.key == key) {
        f.set(base, value);
        found = true;
        break;
      }
    }
    if (!found) throw ValidationError("unknown config key " + key);
  }
  validate(base);
  return base;
}

nlohmann::json config_to_json(const Config& c) {
  nlohmann::json j = nlohmann::json::object();
  j["schema"] = "coverify-config/1";
  for (const Field& f : fields()) j[f.key] = f.get(c);
  return j;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("config " + path + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace coverify
