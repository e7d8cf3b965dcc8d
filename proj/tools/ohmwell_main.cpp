#include "ohmwell/cli.hpp"

int main(int argc, char** argv) { return ohmwell::cli_dispatch(argc, argv); }
