#include <stdio.h>
#include <string.h>
#include "vcpack.h"

#define EXPECT(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s (line %d)\n", #cond, __LINE__); return 1; } } while (0)

int main(void) {
    double b = 0.0;
    EXPECT(vcpack_beta(0.0, &b) == VCPACK_STATUS_OK);
    EXPECT(b == 2.0);
    EXPECT(vcpack_beta(1.0, &b) == VCPACK_STATUS_DIVERGENCE);
    EXPECT(vcpack_last_error() != NULL);

    VcpackFamily *h = NULL;
    EXPECT(vcpack_family_hadamard(3, &h) == VCPACK_STATUS_OK);
    size_t lo = 0, hi = 0;
    EXPECT(vcpack_family_vc_dimension(h, 0, &lo, &hi) == VCPACK_STATUS_OK);
    EXPECT(lo == 3 && hi == 3);
    size_t size = 0;
    int exact = 0;
    EXPECT(vcpack_family_packing(h, 1, 2, 0, &size, &exact) == VCPACK_STATUS_OK);
    EXPECT(size == 8 && exact == 1);

    char *text = NULL;
    EXPECT(vcpack_family_to_text(h, &text) == VCPACK_STATUS_OK);
    EXPECT(strncmp(text, "2 8 8\n", 6) == 0);
    VcpackFamily *g = NULL;
    EXPECT(vcpack_family_parse(text, &g) == VCPACK_STATUS_OK);
    vcpack_string_free(text);
    vcpack_family_free(g);
    vcpack_family_free(h);

    VcpackBoundInput in = {0};
    in.eps = 0.5;
    in.d = 1;
    double v = 0.0;
    EXPECT(vcpack_bound(VCPACK_BOUND_HAUSSLER_UPPER, &in, &v, NULL) == VCPACK_STATUS_OK);
    EXPECT(v > 59.11 && v < 59.12);
    printf("ok\n");
    return 0;
}
