#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "supercharacter.h"

static char *slurp(const char *path) {
    FILE *f = fopen(path, "rb");
    if (!f) return NULL;
    fseek(f, 0, SEEK_END);
    long n = ftell(f);
    fseek(f, 0, SEEK_SET);
    char *buf = malloc(n + 1);
    if (fread(buf, 1, n, f) != (size_t)n) { fclose(f); free(buf); return NULL; }
    buf[n] = 0;
    fclose(f);
    return buf;
}

int main(int argc, char **argv) {
    if (argc < 2) return 2;
    char *json = slurp(argv[1]);
    if (!json) return 2;

    SctTable *t = NULL;
    if (sct_table_from_json(json, &t) != SCT_STATUS_OK) {
        fprintf(stderr, "load: %s\n", sct_last_error());
        return 1;
    }
    free(json);

    SctEnumeration *e = NULL;
    if (sct_enumerate(t, 1, true, &e) != SCT_STATUS_OK) {
        fprintf(stderr, "enumerate: %s\n", sct_last_error());
        return 1;
    }
    size_t n = sct_enumeration_count(e);
    printf("k=%zu theories=%zu\n", sct_table_k(t), n);
    for (size_t i = 0; i < n; i++) {
        char *s = NULL;
        if (sct_enumeration_theory_json(e, i, &s) != SCT_STATUS_OK) return 1;
        printf("%s\n", s);
        sct_string_free(s);
    }

    char *s = NULL;
    if (sct_enumeration_theory_json(e, n, &s) != SCT_STATUS_OUT_OF_RANGE || s != NULL) return 1;

    sct_enumeration_free(e);
    sct_table_free(t);
    return 0;
}
