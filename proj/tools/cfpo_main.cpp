#include <vector>
#include <string>

#include "cfpo/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return cfpo::cli::run(args);
}
