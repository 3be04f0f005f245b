#include "coverify.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "coverify/config.hpp"
#include "coverify/errors.hpp"
#include "coverify/locallemma.hpp"
#include "coverify/oracle.hpp"
#include "coverify/primes.hpp"
#include "coverify/report.hpp"
#include "coverify/shearer.hpp"
#include "coverify/stages.hpp"

struct cov_context {
  coverify::Config config = coverify::default_config();
  coverify::primes::SieveOptions sieve = coverify::primes::options_from_environment();
  cov_progress_fn progress = nullptr;
  void* progress_user = nullptr;
  std::string last_error;
};

struct cov_system {
  coverify::oracle::CongruenceSystem system;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string mpq_text(const mpq_class& q) { return q.get_str(10); }

template <class Fn>
cov_status guard(cov_context* ctx, Fn fn) {
  if (!ctx) return COV_ERR_INVALID_ARGUMENT;
  ctx->last_error.clear();
  try {
    fn();
    return COV_OK;
  } catch (const coverify::Error& e) {
    ctx->last_error = e.what();
    return static_cast<cov_status>(e.code());
  } catch (const std::bad_alloc&) {
    ctx->last_error = "out of memory";
    return COV_ERR_RESOURCE;
  } catch (const std::exception& e) {
    ctx->last_error = e.what();
    return COV_ERR_INTERNAL;
  }
}

void require(bool cond, const char* what) {
  if (!cond) throw coverify::Error(coverify::ErrorCode::invalid_argument, what);
}

}  // namespace

extern "C" {

const char* cov_version(void) { return coverify::report::version(); }

const char* cov_status_name(cov_status status) {
  if (status < COV_OK || status > COV_ERR_INTERNAL) return "unknown";
  return coverify::error_code_name(static_cast<coverify::ErrorCode>(status));
}

void cov_string_free(char* s) { std::free(s); }

cov_status cov_context_new(cov_context** out) {
  if (!out) return COV_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  try {
    *out = new cov_context();
    return COV_OK;
  } catch (const std::bad_alloc&) {
    return COV_ERR_RESOURCE;
  } catch (...) {
    return COV_ERR_INTERNAL;
  }
}

void cov_context_free(cov_context* ctx) { delete ctx; }

const char* cov_last_error(const cov_context* ctx) {
  if (!ctx) return "null context";
  return ctx->last_error.c_str();
}

cov_status cov_context_load_config(cov_context* ctx, const char* path) {
  return guard(ctx, [&] {
    require(path != nullptr, "null path");
    ctx->config = coverify::load_config(path);
  });
}

cov_status cov_context_set_config_json(cov_context* ctx, const char* json) {
  return guard(ctx, [&] {
    require(json != nullptr, "null config");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json);
    } catch (const nlohmann::json::parse_error& e) {
      throw coverify::ParseError(std::string("config: ") + e.what());
    }
    ctx->config = coverify::config_from_json(j);
  });
}

cov_status cov_context_config_json(cov_context* ctx, char** json_out) {
  return guard(ctx, [&] {
    require(json_out != nullptr, "null output");
    *json_out = dup_string(coverify::report::dump(coverify::config_to_json(ctx->config)));
  });
}

cov_status cov_context_set_cache_dir(cov_context* ctx, const char* dir) {
  return guard(ctx, [&] { ctx->sieve.cache_dir = dir ? dir : ""; });
}

cov_status cov_context_set_progress(cov_context* ctx, cov_progress_fn fn, void* user) {
  return guard(ctx, [&] {
    ctx->progress = fn;
    ctx->progress_user = user;
  });
}

cov_status cov_prove(cov_context* ctx, unsigned flags, char** report_json, int* proved) {
  return guard(ctx, [&] {
    require(report_json != nullptr && proved != nullptr, "null output");
    coverify::stages::Progress progress;
    if (ctx->progress) progress = [ctx](const std::string& s) { ctx->progress(s.c_str(), ctx->progress_user); };
    coverify::stages::ProofResult r = coverify::stages::run_proof(ctx->config, ctx->sieve, progress);
    coverify::report::ReportOptions opts;
    opts.timing = (flags & COV_REPORT_TIMING) != 0;
    opts.all_bins = (flags & COV_REPORT_ALL_BINS) != 0;
    *report_json = dup_string(coverify::report::dump(coverify::report::proof_json(r, opts)));
    *proved = r.proved ? 1 : 0;
    if (!r.proved) ctx->last_error = "verification failed: " + r.failure;
  });
}

cov_status cov_recheck_report(cov_context* ctx, const char* report_json, char** summary_json, int* consistent) {
  return guard(ctx, [&] {
    require(report_json != nullptr && summary_json != nullptr && consistent != nullptr, "null argument");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(report_json);
    } catch (const nlohmann::json::parse_error& e) {
      throw coverify::ParseError(std::string("report: ") + e.what());
    }
    coverify::report::Recheck rc = coverify::report::recheck(j);
    nlohmann::json s{{"checks", rc.checks},
                     {"essential_failures", rc.essential_failures},
                     {"mismatches", rc.mismatches},
                     {"proved", rc.proved},
                     {"verdict_consistent", rc.verdict_consistent}};
    if (!rc.first_failure.empty()) s["first_failure"] = rc.first_failure;
    *summary_json = dup_string(coverify::report::dump(s));
    *consistent = rc.verdict_consistent ? 1 : 0;
  });
}

cov_status cov_stage1_shearer(cov_context* ctx, uint64_t pmax, char** json_out, int* holds) {
  return guard(ctx, [&] {
    require(json_out != nullptr && holds != nullptr, "null output");
    if (pmax < 5) throw coverify::DomainError("pmax must be at least 5");
    auto chain = coverify::shearer::verify_chain(coverify::shearer::primes_between_4_and(pmax + 1));
    nlohmann::json j = coverify::report::chain_json(chain);
    j["pmax"] = pmax;
    if (chain.holds && !chain.primes.empty()) {
      j["beta2"] = coverify::interval_json(coverify::shearer::bias_stat_stage1(2, chain.primes).beta);
      j["beta3"] = coverify::interval_json(coverify::shearer::bias_stat_stage1(3, chain.primes).beta);
    }
    *json_out = dup_string(coverify::report::dump(j));
    *holds = chain.holds ? 1 : 0;
  });
}

cov_status cov_window_report(cov_context* ctx, int stage, char** json_out, int* ok) {
  return guard(ctx, [&] {
    require(json_out != nullptr && ok != nullptr, "null output");
    if (stage < 1 || stage > 3) throw coverify::DomainError("stage must be 1, 2 or 3");
    auto w = coverify::primes::window(stage, ctx->sieve);
    auto s = coverify::primes::stats_of(w.primes);
    s.stage = stage;
    s.lo = w.lo;
    s.hi = w.hi;
    if (stage >= 2) s.checks = coverify::primes::uniform_bound_checks(stage, s);
    *json_out = dup_string(coverify::report::dump(coverify::report::window_json(s)));
    *ok = coverify::all_essential_ok(s.checks) ? 1 : 0;
  });
}

cov_status cov_system_parse(cov_context* ctx, const char* text, cov_system** out) {
  return guard(ctx, [&] {
    require(text != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    auto* s = new cov_system{coverify::oracle::parse_system(text)};
    *out = s;
  });
}

cov_status cov_system_load(cov_context* ctx, const char* path, cov_system** out) {
  return guard(ctx, [&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    auto* s = new cov_system{coverify::oracle::load_system(path)};
    *out = s;
  });
}

void cov_system_free(cov_system* sys) { delete sys; }

cov_status cov_system_density(cov_context* ctx, const cov_system* sys, char** rational_out) {
  return guard(ctx, [&] {
    require(sys != nullptr && rational_out != nullptr, "null argument");
    *rational_out = dup_string(mpq_text(coverify::oracle::uncovered_density(sys->system)));
  });
}

cov_status cov_system_max_bias(cov_context* ctx, const cov_system* sys, uint64_t n, char** rational_out) {
  return guard(ctx, [&] {
    require(sys != nullptr && rational_out != nullptr, "null argument");
    *rational_out = dup_string(mpq_text(coverify::oracle::max_bias(sys->system, n)));
  });
}

cov_status cov_lll_certificate(cov_context* ctx, const cov_system* sys, const char* M, int iterate, char** json_out,
                               int* ok) {
  return guard(ctx, [&] {
    require(sys != nullptr && M != nullptr && json_out != nullptr && ok != nullptr, "null argument");
    auto inst = coverify::lll::SieveInstance::from_system(sys->system);
    coverify::lll::NewtonOptions opts;
    opts.iterate = iterate != 0;
    auto cert = coverify::lll::newton_fixed_point(inst, coverify::Interval::decimal(M), opts);
    nlohmann::json j = coverify::report::fixed_point_json(cert);
    nlohmann::json ps = nlohmann::json::array();
    for (auto p : inst.primes()) ps.push_back(p);
    j["primes"] = ps;
    bool good = cert.condition_ok && (!opts.iterate || cert.has_fixed_point);
    if (cert.has_fixed_point) {
      coverify::lll::Weights x;
      for (double v : cert.x_verified) x.emplace_back(v);
      j["density_lower_bound"] = coverify::interval_json(coverify::lll::density_lower_bound(inst, x));
    }
    *json_out = dup_string(coverify::report::dump(j));
    *ok = good ? 1 : 0;
  });
}

}  // extern "C"
