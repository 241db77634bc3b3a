#include <mpi.h>
#include <stdio.h>
#include <stdlib.h>

#define N 1024

int main(int argc, char **argv)
{
    int rank, size;
    double a[N], local_sum = 0.0, sum = 0.0;
    MPI_Init(&argc, &argv);
    MPI_Comm_rank(MPI_COMM_WORLD, &rank);
    MPI_Comm_size(MPI_COMM_WORLD, &size);
    int chunk = N / size;
    double *part = malloc(chunk * sizeof(double));
    if (rank == 0)
    {
        for (int i = 0; i < N; i++)
        {
            a[i] = i + 1;
        }
    }
    MPI_Scatter(a, chunk, MPI_DOUBLE, part, chunk, MPI_DOUBLE, 0, MPI_COMM_WORLD);
    for (int i = 0; i < chunk; i++)
    {
        local_sum += part[i];
    }
    MPI_Reduce(&local_sum, &sum, 1, MPI_DOUBLE, MPI_SUM, 0, MPI_COMM_WORLD);
    if (rank == 0)
    {
        printf("average = %.6f\n", sum / N);
    }
    free(part);
    MPI_Finalize();
    return 0;
}
