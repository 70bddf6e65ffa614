// placeholder, replaced by the real acceptance suite
#include <cstdio>
int main() { std::puts("acceptance: TODO"); return 1; }
