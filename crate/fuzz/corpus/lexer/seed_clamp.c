/* clamp.c - bounded accumulator */
#include <stdint.h>

static int clamp(int v, int lo, int hi)
{
    if (v < lo) {
        return lo;
    }
    return v > hi ? hi : v;
}

// sum with saturation
int total(const int *xs, int n)
{
    int s = 0;
    for (int i = 0; i < n; i++) {
        s = clamp(s + xs[i], -100, 100);
    }
    while (s % 2 && n > 0) s--;
    return s;
}
