#include <stdio.h>

#define SAMPLES 4000000

double next(unsigned long long *s)
{
    *s = *s * 6364136223846793005ULL + 1442695040888963407ULL;
    return (*s >> 11) * (1.0 / 9007199254740992.0);
}

int main(void)
{
    long hits = 0;
    unsigned long long seed = 12345;
    for (long i = 0; i < SAMPLES; i++)
    {
        double x = next(&seed);
        double y = next(&seed);
        if (x * x + y * y <= 1.0)
        {
            hits++;
        }
    }
    printf("pi = %.6f\n", 4.0 * hits / SAMPLES);
    return 0;
}
