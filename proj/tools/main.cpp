#include "cli.hpp"

int main(int argc, char** argv) {
    return stbclab::cli::run(argc, argv);
}
