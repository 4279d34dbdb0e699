#include <stdio.h>
#include "mtstar.h"

int main(void) {
    MtsContext *ctx = NULL;
    if (mts_context_new(30, 100000, &ctx) != MTS_STATUS_OK) {
        fprintf(stderr, "%s\n", mts_last_error_message());
        return 1;
    }
    MtsValue *v = NULL;
    if (mts_t_star_direct(ctx, "3", &v) != MTS_STATUS_OK) {
        fprintf(stderr, "%s\n", mts_last_error_message());
        return 1;
    }
    printf("t*(3) = %s +- %s\n", mts_value_estimate(v), mts_value_error_indicator(v));
    mts_value_free(v);

    if (mts_t_star_direct(ctx, "1,2", &v) != MTS_STATUS_DOMAIN) {
        return 1;
    }
    printf("rejected: %s\n", mts_last_error_message());
    mts_context_free(ctx);
    return 0;
}
