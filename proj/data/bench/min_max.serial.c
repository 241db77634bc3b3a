#include <stdio.h>

#define N 1024

int main(void)
{
    int a[N];
    for (int i = 0; i < N; i++)
    {
        a[i] = (i * 37) % 101 - 50;
    }
    int lo = a[0], hi = a[0];
    for (int i = 1; i < N; i++)
    {
        if (a[i] < lo)
        {
            lo = a[i];
        }
        if (a[i] > hi)
        {
            hi = a[i];
        }
    }
    printf("min = %d max = %d\n", lo, hi);
    return 0;
}
