#include <stdio.h>
#include <string.h>

#include "coverify.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

int main(int argc, char** argv) {
  if (argc < 2) {
    fprintf(stderr, "usage: test_capi classic12.sys\n");
    return 2;
  }
  EXPECT(strcmp(cov_version(), "1.0.0") == 0);
  EXPECT(strcmp(cov_status_name(COV_OK), "ok") == 0);
  EXPECT(strcmp(cov_status_name(COV_ERR_VALIDATION), "ValidationError") == 0);
  EXPECT(strcmp(cov_status_name((cov_status)99), "unknown") == 0);
  EXPECT(cov_context_new(NULL) == COV_ERR_INVALID_ARGUMENT);

  cov_context* ctx = NULL;
  EXPECT(cov_context_new(&ctx) == COV_OK);

  cov_system* sys = NULL;
  EXPECT(cov_system_load(ctx, argv[1], &sys) == COV_OK);
  char* text = NULL;
  EXPECT(cov_system_density(ctx, sys, &text) == COV_OK);
  EXPECT(text && strcmp(text, "0") == 0);
  cov_string_free(text);
  text = NULL;
  EXPECT(cov_system_max_bias(ctx, sys, 5, &text) == COV_ERR_EMPTY_FIBER);
  EXPECT(strlen(cov_last_error(ctx)) > 0);
  cov_system_free(sys);

  cov_system* bad = NULL;
  EXPECT(cov_system_parse(ctx, "0 mod 1\n", &bad) == COV_ERR_VALIDATION);
  EXPECT(bad == NULL);
  EXPECT(cov_system_parse(ctx, "x mod 2\n", &bad) == COV_ERR_PARSE);
  EXPECT(cov_system_load(ctx, "/nonexistent.sys", &bad) == COV_ERR_IO);

  cov_system* one = NULL;
  EXPECT(cov_system_parse(ctx, "1 mod 5\n", &one) == COV_OK);
  EXPECT(cov_system_max_bias(ctx, one, 5, &text) == COV_OK);
  EXPECT(text && strcmp(text, "5/4") == 0);
  cov_string_free(text);
  text = NULL;
  EXPECT(cov_system_density(ctx, one, &text) == COV_OK);
  EXPECT(text && strcmp(text, "4/5") == 0);
  cov_string_free(text);
  cov_system_free(one);

  cov_system* sparse = NULL;
  int ok = 0;
  EXPECT(cov_system_parse(ctx, "0 mod 35\n1 mod 55\n3 mod 385\n", &sparse) == COV_OK);
  EXPECT(cov_lll_certificate(ctx, sparse, "1", 1, &text, &ok) == COV_OK);
  EXPECT(ok == 1);
  EXPECT(text && strstr(text, "density_lower_bound") != NULL);
  cov_string_free(text);
  EXPECT(cov_lll_certificate(ctx, sparse, "one", 1, &text, &ok) == COV_ERR_PARSE);
  cov_system_free(sparse);

  int holds = 0;
  EXPECT(cov_stage1_shearer(ctx, 221, &text, &holds) == COV_OK);
  EXPECT(holds == 1);
  cov_string_free(text);
  EXPECT(cov_stage1_shearer(ctx, 3, &text, &holds) == COV_ERR_DOMAIN);

  EXPECT(cov_context_set_config_json(ctx, "{\"asym.nope\": 1}") == COV_ERR_VALIDATION);
  EXPECT(cov_context_set_config_json(ctx, "{") == COV_ERR_PARSE);
  EXPECT(cov_context_set_config_json(ctx, "{\"asym.M\": \"2.98\"}") == COV_OK);
  EXPECT(cov_context_config_json(ctx, &text) == COV_OK);
  EXPECT(text && strstr(text, "\"asym.M\": \"2.98\"") != NULL);
  cov_string_free(text);

  EXPECT(cov_recheck_report(ctx, "{}", &text, &ok) == COV_ERR_PARSE);

  cov_context_free(ctx);
  if (failures) {
    fprintf(stderr, "%d C API checks failed\n", failures);
    return 1;
  }
  printf("C API checks passed\n");
  return 0;
}
