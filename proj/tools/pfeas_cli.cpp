#include <cstdio>

#include "pfeas/version.hpp"

int main(int argc, char* argv[]) {
    (void)argc;
    (void)argv;
    std::printf("pfeas %s\n", pfeas::version_string);
    return 0;
}
