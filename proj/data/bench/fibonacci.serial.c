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

int main(void)
{
    long sum = 0;
    for (int i = 1; i <= TERMS; i++)
    {
        sum += fib(i);
    }
    printf("sum = %ld\n", sum);
    return 0;
}
