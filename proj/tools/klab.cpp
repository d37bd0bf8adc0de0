#include "klab/cli.hpp"

int main(int argc, char** argv) {
    return klab::cli_main(argc, argv);
}
