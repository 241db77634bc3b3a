#include <mpi.h>
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

int main(int argc, char **argv)
{
    int rank, size;
    int data[N], part[N];
    MPI_Init(&argc, &argv);
    MPI_Comm_rank(MPI_COMM_WORLD, &rank);
    MPI_Comm_size(MPI_COMM_WORLD, &size);
    int chunk = N / size;
    for (int i = 0; i < N; i++)
    {
        data[i] = i * 7 % N;
    }
    MPI_Scatter(data, chunk, MPI_INT, part, chunk, MPI_INT, 0, MPI_COMM_WORLD);
    msort(part, chunk, 1);
    MPI_Gather(part, chunk, MPI_INT, data, chunk, MPI_INT, 0, MPI_COMM_WORLD);
    if (rank == 0)
    {
        msort(data, N, chunk);
        for (int i = 0; i < N; i++)
        {
            printf("%d\n", data[i]);
        }
    }
    MPI_Finalize();
    return 0;
}
