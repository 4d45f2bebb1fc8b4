#include <cstdio>

int main() {
    std::puts("qkms: CLI wiring arrives with the module build");
    return 0;
}
