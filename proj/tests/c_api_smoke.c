/* Exercises the C interface from plain C. */
#include <coedit/coedit.h>

#include <stdio.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond)                                         \
  do {                                                       \
    if (!(cond)) {                                           \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                            \
    }                                                        \
  } while (0)

int main(void) {
  coedit_session* s = NULL;
  coedit_buffer* out = NULL;
  const char* src = "int a = 1; // c\n";

  EXPECT(coedit_session_new(&s) == COEDIT_OK);
  EXPECT(strcmp(coedit_status_name(COEDIT_E_MALFORMED_SCRIPT), "MalformedScript") == 0);

  EXPECT(coedit_tokenize(s, src, strlen(src), "a", 0, &out) == COEDIT_OK);
  EXPECT(strcmp(coedit_buffer_data(out), "[\"int\",\"a\",\"=\",\"1\",\";\"]") == 0);
  EXPECT(coedit_buffer_size(out) == strlen(coedit_buffer_data(out)));
  coedit_buffer_free(out);
  out = NULL;

  EXPECT(coedit_disambiguate(s, "[\"a\",\"b\",\"a\"]", "[\"a\",\"c\",\"a\"]", &out) == COEDIT_OK);
  EXPECT(strcmp(coedit_buffer_data(out), "<ReplaceOld> b <ReplaceNew> c <ReplaceEnd>") == 0);
  coedit_buffer_free(out);
  out = NULL;

  EXPECT(coedit_apply(s, "<ReplaceOld> b <ReplaceNew> c <ReplaceEnd>", "[\"a\",\"b\"]", &out) == COEDIT_OK);
  EXPECT(strcmp(coedit_buffer_data(out), "[\"a\",\"c\"]") == 0);
  coedit_buffer_free(out);
  out = NULL;

  EXPECT(coedit_parse_script(s, "<ReplaceOld> a <ReplaceEnd>", "concise", &out) == COEDIT_E_MALFORMED_SCRIPT);
  EXPECT(out == NULL);
  EXPECT(coedit_session_last_error_offset(s) == 15);
  EXPECT(strlen(coedit_session_last_error(s)) > 0);

  EXPECT(coedit_apply(s, "<Delete> q <DeleteEnd>", "[\"a\"]", &out) == COEDIT_E_ANCHOR_NOT_FOUND);
  EXPECT(coedit_diff(s, "not json", "[]", &out) == COEDIT_E_INVALID_ARGUMENT);
  EXPECT(coedit_session_set_option(s, "backend.token", "x") == COEDIT_E_INVALID_ARGUMENT);
  EXPECT(coedit_session_set_option(s, "direction", "cs2java") == COEDIT_OK);
  EXPECT(coedit_session_last_error(s)[0] == '\0');
  EXPECT(coedit_session_set_option(s, "level", "2") == COEDIT_E_INVALID_ARGUMENT);
  EXPECT(coedit_tokenize(NULL, src, strlen(src), "a", 0, &out) == COEDIT_E_INVALID_ARGUMENT);
  EXPECT(coedit_stats(s, "/nonexistent-dir", &out) == COEDIT_E_IO);

  coedit_session_free(s);
  if (failures == 0) printf("c api smoke: ok\n");
  return failures == 0 ? 0 : 1;
}
