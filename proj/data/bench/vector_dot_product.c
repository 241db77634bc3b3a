#include <mpi.h>
#include <stdio.h>
#include <stdlib.h>

#define N 1024

int main(int argc, char **argv)
{
    int rank, size;
    long x[N], y[N], local = 0, dot = 0;
    MPI_Init(&argc, &argv);
    MPI_Comm_rank(MPI_COMM_WORLD, &rank);
    MPI_Comm_size(MPI_COMM_WORLD, &size);
    int chunk = N / size;
    long *xs = malloc(chunk * sizeof(long));
    long *ys = malloc(chunk * sizeof(long));
    if (rank == 0)
    {
        for (int i = 0; i < N; i++)
        {
            x[i] = i;
            y[i] = 2 * i + 1;
        }
    }
    MPI_Scatter(x, chunk, MPI_LONG, xs, chunk, MPI_LONG, 0, MPI_COMM_WORLD);
    MPI_Scatter(y, chunk, MPI_LONG, ys, chunk, MPI_LONG, 0, MPI_COMM_WORLD);
    for (int i = 0; i < chunk; i++)
    {
        local += xs[i] * ys[i];
    }
    MPI_Reduce(&local, &dot, 1, MPI_LONG, MPI_SUM, 0, MPI_COMM_WORLD);
    if (rank == 0)
    {
        printf("dot = %ld\n", dot);
    }
    free(xs);
    free(ys);
    MPI_Finalize();
    return 0;
}
