#include <mpi.h>
#include <stdio.h>

#define STEPS 1200000

double f(double x)
{
    return x * x;
}

int main(int argc, char **argv)
{
    int rank, size;
    double local = 0.0, total = 0.0;
    MPI_Init(&argc, &argv);
    MPI_Comm_rank(MPI_COMM_WORLD, &rank);
    MPI_Comm_size(MPI_COMM_WORLD, &size);
    double h = 3.0 / STEPS;
    long n = STEPS / size;
    double a = rank * n * h;
    local = (f(a) + f(a + n * h)) / 2.0;
    for (long i = 1; i < n; i++)
    {
        local += f(a + i * h);
    }
    local *= h;
    MPI_Reduce(&local, &total, 1, MPI_DOUBLE, MPI_SUM, 0, MPI_COMM_WORLD);
    if (rank == 0)
    {
        printf("integral = %.10f\n", total);
    }
    MPI_Finalize();
    return 0;
}
