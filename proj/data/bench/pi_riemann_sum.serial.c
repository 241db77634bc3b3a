#include <stdio.h>

int main(void)
{
    long n = 1000000;
    double h = 1.0 / n, pi = 0.0;
    for (long i = 0; i < n; i++)
    {
        double x = h * (i + 0.5);
        pi += 4.0 / (1.0 + x * x);
    }
    printf("pi = %.10f\n", pi * h);
    return 0;
}
