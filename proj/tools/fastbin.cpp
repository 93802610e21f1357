#include "fastbin/harness/cli.hpp"

int main(int argc, char** argv) { return fastbin::cli::run(argc, argv); }
