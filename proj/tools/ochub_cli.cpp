#include "ochub/cli.hpp"

int main(int argc, char** argv) { return ochub::cli::run(argc, argv); }
