#include "ifm/cli.hpp"

int main(int argc, char **argv) { return ifm::cli::run(argc, argv); }
