#include <string>
#include <vector>

#include "hpdet/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return hpdet::main_entry(args);
}
