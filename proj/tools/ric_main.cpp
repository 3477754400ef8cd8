#include "ric/cli.hpp"

int main(int argc, char** argv) { return ric::cli::dispatch(argc, argv); }
