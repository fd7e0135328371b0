#include "maxprob/cli.hpp"

int main(int argc, char** argv) { return maxprob::run_cli(argc, argv); }
