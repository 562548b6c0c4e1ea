#include "cli.hpp"

int main(int argc, char** argv) { return ramsey::cli::run(argc, argv); }
