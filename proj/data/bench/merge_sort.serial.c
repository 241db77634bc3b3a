#include <stdio.h>
#include <string.h>

#define N 16

/* Merge sort of a[0..n), treating runs of length w as already sorted. */
void msort(int *a, int n, int w)
{
    int t[N], i = 0, j = n / 2;
    if (n > w)
    {
        msort(a, j, w);
        msort(a + j, n - j, w);
        for (int k = 0; k < n; k++)
        {
            t[k] = j >= n || (i < n / 2 && a[i] <= a[j]) ? a[i++] : a[j++];
        }
        memcpy(a, t, n * sizeof(int));
    }
}

int main(void)
{
    int data[N];
    for (int i = 0; i < N; i++)
    {
        data[i] = i * 7 % N;
    }
    msort(data, N, 1);
    for (int i = 0; i < N; i++)
    {
        printf("%d\n", data[i]);
    }
    return 0;
}
