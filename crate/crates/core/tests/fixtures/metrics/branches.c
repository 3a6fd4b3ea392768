void f(int n)
{
    if (n) n--;
    while (n) n--;
    for (;;) break;
}
