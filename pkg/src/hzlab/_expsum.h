/* Inner step of the exponential-sum recurrence: z[k] *= r[k], then sum z. */
#ifndef HZLAB_EXPSUM_H
#define HZLAB_EXPSUM_H

#include <stddef.h>

static inline void hz_rotate(ptrdiff_t n, double *restrict zr, double *restrict zi,
                             const double *restrict rr, const double *restrict ri)
{
    for (ptrdiff_t k = 0; k < n; k++) {
        double xr = zr[k] * rr[k] - zi[k] * ri[k];
        double xi = zr[k] * ri[k] + zi[k] * rr[k];
        zr[k] = xr;
        zi[k] = xi;
    }
}

/* Sum with 8 fixed lanes; the lane layout depends only on n, so the result
   is deterministic. */
static inline double hz_sum(ptrdiff_t n, const double *restrict x)
{
    double acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    ptrdiff_t k = 0;
    for (; k + 8 <= n; k += 8)
        for (int j = 0; j < 8; j++)
            acc[j] += x[k + j];
    double tail = 0.0;
    for (; k < n; k++)
        tail += x[k];
    return ((acc[0] + acc[1]) + (acc[2] + acc[3]))
         + ((acc[4] + acc[5]) + (acc[6] + acc[7])) + tail;
}

#endif
