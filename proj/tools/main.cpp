#include "mdu/cli.hpp"

int main(int argc, char** argv) { return mdu::cli_main(argc, argv); }
