#include <stdio.h>

int main(void)
{
    int n = 20;
    double result = 1.0;
    for (int i = 1; i <= n; i++)
    {
        result *= i;
    }
    printf("%d! = %.0f\n", n, result);
    return 0;
}
