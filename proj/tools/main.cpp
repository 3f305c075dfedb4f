#include "ibaudit/cli.hpp"

int main(int argc, char** argv) { return ibaudit::cli::run(argc, argv); }
