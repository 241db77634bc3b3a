#include <stdio.h>

#define N 1024

int main(void)
{
    long total = 0;
    for (int i = 0; i < N; i++)
    {
        total += i + 1;
    }
    printf("reduce = %ld gather = %ld\n", total, total);
    return 0;
}
