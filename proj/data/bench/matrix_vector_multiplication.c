#include <mpi.h>
#include <stdio.h>

#define N 8

int main(int argc, char **argv)
{
    int rank, size;
    double a[N][N], x[N], y[N], sum = 0.0;
    MPI_Init(&argc, &argv);
    MPI_Comm_rank(MPI_COMM_WORLD, &rank);
    MPI_Comm_size(MPI_COMM_WORLD, &size);
    int rows = N / size;
    double local_a[N][N], local_y[N];
    if (rank == 0)
    {
        for (int i = 0; i < N; i++)
        {
            x[i] = 1.0;
            for (int j = 0; j < N; j++)
            {
                a[i][j] = i + j;
            }
        }
    }
    MPI_Bcast(x, N, MPI_DOUBLE, 0, MPI_COMM_WORLD);
    MPI_Scatter(a, rows * N, MPI_DOUBLE, local_a, rows * N, MPI_DOUBLE, 0, MPI_COMM_WORLD);
    for (int i = 0; i < rows; i++)
    {
        local_y[i] = 0.0;
        for (int j = 0; j < N; j++)
        {
            local_y[i] += local_a[i][j] * x[j];
        }
    }
    MPI_Gather(local_y, rows, MPI_DOUBLE, y, rows, MPI_DOUBLE, 0, MPI_COMM_WORLD);
    if (rank == 0)
    {
        for (int i = 0; i < N; i++)
        {
            sum += y[i];
        }
        printf("checksum = %.6f\n", sum);
    }
    MPI_Finalize();
    return 0;
}
