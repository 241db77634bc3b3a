#include <mpi.h>
#include <stdio.h>

#define SAMPLES 4000000

double next(unsigned long long *s)
{
    *s = *s * 6364136223846793005ULL + 1442695040888963407ULL;
    return (*s >> 11) * (1.0 / 9007199254740992.0);
}

int main(int argc, char **argv)
{
    int rank, size;
    long hits = 0, total = 0;
    MPI_Init(&argc, &argv);
    MPI_Comm_rank(MPI_COMM_WORLD, &rank);
    MPI_Comm_size(MPI_COMM_WORLD, &size);
    unsigned long long seed = 12345 + rank;
    long n = SAMPLES / size;
    for (long i = 0; i < n; i++)
    {
        double x = next(&seed);
        double y = next(&seed);
        if (x * x + y * y <= 1.0)
        {
            hits++;
        }
    }
    MPI_Reduce(&hits, &total, 1, MPI_LONG, MPI_SUM, 0, MPI_COMM_WORLD);
    if (rank == 0)
    {
        printf("pi = %.6f\n", 4.0 * total / SAMPLES);
    }
    MPI_Finalize();
    return 0;
}
