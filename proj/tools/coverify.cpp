#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "coverify.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct Context {
  cov_context* ctx = nullptr;
  Context() {
    if (cov_context_new(&ctx) != COV_OK) throw std::runtime_error("cannot create context");
  }
  ~Context() { cov_context_free(ctx); }
  Context(const Context&) = delete;
  Context& operator=(const Context&) = delete;
};

struct OwnedString {
  char* s = nullptr;
  ~OwnedString() { cov_string_free(s); }
  std::string str() const { return s ? s : ""; }
};

int report_error(const Context& c, cov_status st) {
  std::cerr << "coverify: " << cov_status_name(st) << ": " << cov_last_error(c.ctx) << "\n";
  return st == COV_ERR_VERIFICATION ? kExitFailed : kExitUsage;
}

bool write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return true;
  }
  std::ofstream out(path);
  if (!out) return false;
  out << text;
  return static_cast<bool>(out);
}

bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path);
  if (!in) return false;
  std::stringstream ss;
  ss << in.rdbuf();
  text = ss.str();
  return true;
}

void print_progress(const char* stage, void*) { std::cerr << "coverify: " << stage << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interval certificates for the covering-system sieve argument"};
  app.require_subcommand(1);
  std::string config_path, cache_dir;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON file overriding constants")->check(CLI::ExistingFile);
  app.add_option("--cache-dir", cache_dir, "Prime cache directory (default: $COVERIFY_PRIME_CACHE)");
  app.add_flag("-q,--quiet", quiet, "No progress messages");
  app.set_version_flag("--version", std::string(cov_version()));

  auto* prove = app.add_subcommand("prove", "Run every stage and emit the proof report");
  std::string prove_out;
  bool timing = false, all_bins = false, print_config = false;
  prove->add_option("-o,--output", prove_out, "Report path (default: stdout)");
  prove->add_flag("--timing", timing, "Record stage timings in the report");
  prove->add_flag("--all-bins", all_bins, "Record every bin of the uniform stage");
  prove->add_flag("--print-config", print_config, "Print the effective configuration and exit");

  auto* shearer = app.add_subcommand("stage1-shearer", "Shearer chain and bias statistics for 4 < p <= pmax");
  std::uint64_t pmax = 221;
  shearer->add_option("--pmax", pmax, "Largest prime in the chain")->capture_default_str();

  auto* primes = app.add_subcommand("primes", "Window statistics and the uniform window bounds");
  int stage = 1;
  primes->add_option("--stage", stage, "Window index 1, 2 or 3")->capture_default_str()->check(CLI::Range(1, 3));

  auto* lll = app.add_subcommand("lll", "Fixed-point certificate for the sieve instance of a system");
  std::string instance, radius = "1";
  bool no_iterate = false;
  lll->add_option("--instance", instance, "Congruence system file")->required()->check(CLI::ExistingFile);
  lll->add_option("--M", radius, "Radius M as a decimal")->capture_default_str();
  lll->add_flag("--no-iterate", no_iterate, "Only the closed-form constants");

  auto* oracle = app.add_subcommand("oracle", "Exact brute-force computations");
  oracle->require_subcommand(1);
  auto* check = oracle->add_subcommand("check", "Density and bias of a congruence system");
  std::string sys_path;
  bool density = false;
  std::uint64_t bias_n = 0;
  check->add_option("file", sys_path, "System file")->required()->check(CLI::ExistingFile);
  check->add_flag("--density", density, "Print the exact uncovered density");
  check->add_option("--bias", bias_n, "Print the exact max bias modulo n");

  auto* rep = app.add_subcommand("report", "Re-check a saved proof report");
  std::string report_path;
  rep->add_option("file", report_path, "Report produced by prove")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Context c;
  cov_status st = COV_OK;
  if (!config_path.empty() && (st = cov_context_load_config(c.ctx, config_path.c_str())) != COV_OK) {
    return report_error(c, st);
  }
  if (!cache_dir.empty()) cov_context_set_cache_dir(c.ctx, cache_dir.c_str());
  if (!quiet) cov_context_set_progress(c.ctx, print_progress, nullptr);

  if (*prove) {
    OwnedString out;
    if (print_config) {
      if ((st = cov_context_config_json(c.ctx, &out.s)) != COV_OK) return report_error(c, st);
      std::cout << out.str();
      return kExitOk;
    }
    unsigned flags = (timing ? COV_REPORT_TIMING : 0u) | (all_bins ? COV_REPORT_ALL_BINS : 0u);
    int proved = 0;
    if ((st = cov_prove(c.ctx, flags, &out.s, &proved)) != COV_OK) return report_error(c, st);
    if (!write_output(out.str(), prove_out)) {
      std::cerr << "coverify: cannot write " << prove_out << "\n";
      return kExitUsage;
    }
    if (!proved) {
      std::cerr << "coverify: not proved: " << cov_last_error(c.ctx) << "\n";
      return kExitFailed;
    }
    std::cerr << "coverify: proved\n";
    return kExitOk;
  }

  if (*shearer) {
    OwnedString out;
    int holds = 0;
    if ((st = cov_stage1_shearer(c.ctx, pmax, &out.s, &holds)) != COV_OK) return report_error(c, st);
    std::cout << out.str();
    if (!holds) {
      auto j = nlohmann::json::parse(out.str());
      std::cerr << "coverify: chain fails at " << j.value("fail_prime", std::uint64_t{0}) << " ("
                << j.value("reason", std::string()) << ")\n";
      return kExitFailed;
    }
    return kExitOk;
  }

  if (*primes) {
    OwnedString out;
    int ok = 0;
    if ((st = cov_window_report(c.ctx, stage, &out.s, &ok)) != COV_OK) return report_error(c, st);
    std::cout << out.str();
    return ok ? kExitOk : kExitFailed;
  }

  if (*lll) {
    cov_system* sys = nullptr;
    if ((st = cov_system_load(c.ctx, instance.c_str(), &sys)) != COV_OK) return report_error(c, st);
    OwnedString out;
    int ok = 0;
    st = cov_lll_certificate(c.ctx, sys, radius.c_str(), no_iterate ? 0 : 1, &out.s, &ok);
    cov_system_free(sys);
    if (st != COV_OK) return report_error(c, st);
    std::cout << out.str();
    return ok ? kExitOk : kExitFailed;
  }

  if (*check) {
    cov_system* sys = nullptr;
    if ((st = cov_system_load(c.ctx, sys_path.c_str(), &sys)) != COV_OK) return report_error(c, st);
    bool any = density || bias_n > 0;
    if (density || !any) {
      OwnedString d;
      if ((st = cov_system_density(c.ctx, sys, &d.s)) != COV_OK) {
        cov_system_free(sys);
        return report_error(c, st);
      }
      if (any) {
        std::cout << d.str() << "\n";
      } else {
        std::cout << "density " << d.str() << "\n" << "covers " << (d.str() == "0" ? "yes" : "no") << "\n";
      }
    }
    if (bias_n > 0) {
      OwnedString b;
      if ((st = cov_system_max_bias(c.ctx, sys, bias_n, &b.s)) != COV_OK) {
        cov_system_free(sys);
        return report_error(c, st);
      }
      std::cout << b.str() << "\n";
    }
    cov_system_free(sys);
    return kExitOk;
  }

  if (*rep) {
    std::string text;
    if (!read_file(report_path, text)) {
      std::cerr << "coverify: cannot read " << report_path << "\n";
      return kExitUsage;
    }
    OwnedString out;
    int consistent = 0;
    if ((st = cov_recheck_report(c.ctx, text.c_str(), &out.s, &consistent)) != COV_OK) return report_error(c, st);
    std::cout << out.str();
    bool proved = nlohmann::json::parse(out.str()).value("proved", false);
    return consistent && proved ? kExitOk : kExitFailed;
  }
  return kExitUsage;
}
