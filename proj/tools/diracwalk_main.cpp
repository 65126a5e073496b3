#include <cstdio>

int main() {
  std::puts("diracwalk: CLI under construction");
  return 2;
}
