#include "fhm/cli.hpp"

int main(int argc, char** argv) { return fhm::cli_main(argc, argv); }
