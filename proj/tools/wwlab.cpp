#include "wwlab/cli.hpp"

int main(int argc, char** argv) { return wwlab::cli_dispatch(argc, argv); }
