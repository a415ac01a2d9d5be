#include "swarmsim/harness/cli.hpp"

int main(int argc, char** argv) {
    return swarmsim::harness::cli_main(argc, argv);
}
