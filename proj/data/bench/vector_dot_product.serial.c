#include <stdio.h>

#define N 1024

int main(void)
{
    long x[N], y[N], dot = 0;
    for (int i = 0; i < N; i++)
    {
        x[i] = i;
        y[i] = 2 * i + 1;
    }
    for (int i = 0; i < N; i++)
    {
        dot += x[i] * y[i];
    }
    printf("dot = %ld\n", dot);
    return 0;
}
