#include <stdio.h>

#define N 1024

int main(void)
{
    double a[N], sum = 0.0;
    for (int i = 0; i < N; i++)
    {
        a[i] = i + 1;
    }
    for (int i = 0; i < N; i++)
    {
        sum += a[i];
    }
    printf("average = %.6f\n", sum / N);
    return 0;
}
