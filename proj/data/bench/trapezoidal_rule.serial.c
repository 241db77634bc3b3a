#include <stdio.h>

#define STEPS 1200000

double f(double x)
{
    return x * x;
}

int main(void)
{
    double h = 3.0 / STEPS;
    double total = (f(0.0) + f(3.0)) / 2.0;
    for (long i = 1; i < STEPS; i++)
    {
        total += f(i * h);
    }
    printf("integral = %.10f\n", total * h);
    return 0;
}
