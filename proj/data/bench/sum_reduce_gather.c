#include <mpi.h>
#include <stdio.h>

#define N 1024

int main(int argc, char **argv)
{
    int rank, size;
    long local = 0, total = 0, parts[64];
    MPI_Init(&argc, &argv);
    MPI_Comm_rank(MPI_COMM_WORLD, &rank);
    MPI_Comm_size(MPI_COMM_WORLD, &size);
    int chunk = N / size;
    for (int i = rank * chunk; i < (rank + 1) * chunk; i++)
    {
        local += i + 1;
    }
    MPI_Reduce(&local, &total, 1, MPI_LONG, MPI_SUM, 0, MPI_COMM_WORLD);
    MPI_Gather(&local, 1, MPI_LONG, parts, 1, MPI_LONG, 0, MPI_COMM_WORLD);
    if (rank == 0)
    {
        long check = 0;
        for (int r = 0; r < size; r++)
        {
            check += parts[r];
        }
        printf("reduce = %ld gather = %ld\n", total, check);
    }
    MPI_Finalize();
    return 0;
}
