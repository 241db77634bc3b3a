#include <mpi.h>
#include <stdio.h>

#define TERMS 30

long fib(int n)
{
    long a = 0, b = 1;
    for (int i = 0; i < n; i++)
    {
        long t = a + b;
        a = b;
        b = t;
    }
    return a;
}

int main(int argc, char **argv)
{
    int rank, size;
    long local = 0, part = 0;
    MPI_Init(&argc, &argv);
    MPI_Comm_rank(MPI_COMM_WORLD, &rank);
    MPI_Comm_size(MPI_COMM_WORLD, &size);
    for (int i = rank + 1; i <= TERMS; i += size)
    {
        local += fib(i);
    }
    if (rank != 0)
    {
        MPI_Send(&local, 1, MPI_LONG, 0, 0, MPI_COMM_WORLD);
    }
    else
    {
        for (int r = 1; r < size; r++)
        {
            MPI_Recv(&part, 1, MPI_LONG, r, 0, MPI_COMM_WORLD, MPI_STATUS_IGNORE);
            local += part;
        }
        printf("sum = %ld\n", local);
    }
    MPI_Finalize();
    return 0;
}
