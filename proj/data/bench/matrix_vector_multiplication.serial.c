#include <stdio.h>

#define N 8

int main(void)
{
    double a[N][N], x[N], y[N], sum = 0.0;
    for (int i = 0; i < N; i++)
    {
        x[i] = 1.0;
        for (int j = 0; j < N; j++)
        {
            a[i][j] = i + j;
        }
    }
    for (int i = 0; i < N; i++)
    {
        y[i] = 0.0;
        for (int j = 0; j < N; j++)
        {
            y[i] += a[i][j] * x[j];
        }
        sum += y[i];
    }
    printf("checksum = %.6f\n", sum);
    return 0;
}
