#include <mpi.h>
#include <stdio.h>
#include <stdlib.h>

#define N 1024

int main(int argc, char **argv)
{
    int rank, size;
    int a[N], lo = 0, hi = 0;
    MPI_Init(&argc, &argv);
    MPI_Comm_rank(MPI_COMM_WORLD, &rank);
    MPI_Comm_size(MPI_COMM_WORLD, &size);
    int chunk = N / size;
    int *part = malloc(chunk * sizeof(int));
    if (rank == 0)
    {
        for (int i = 0; i < N; i++)
        {
            a[i] = (i * 37) % 101 - 50;
        }
    }
    MPI_Scatter(a, chunk, MPI_INT, part, chunk, MPI_INT, 0, MPI_COMM_WORLD);
    int local_lo = part[0], local_hi = part[0];
    for (int i = 1; i < chunk; i++)
    {
        if (part[i] < local_lo)
        {
            local_lo = part[i];
        }
        if (part[i] > local_hi)
        {
            local_hi = part[i];
        }
    }
    MPI_Reduce(&local_lo, &lo, 1, MPI_INT, MPI_MIN, 0, MPI_COMM_WORLD);
    MPI_Reduce(&local_hi, &hi, 1, MPI_INT, MPI_MAX, 0, MPI_COMM_WORLD);
    if (rank == 0)
    {
        printf("min = %d max = %d\n", lo, hi);
    }
    free(part);
    MPI_Finalize();
    return 0;
}
