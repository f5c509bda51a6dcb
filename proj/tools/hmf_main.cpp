#include "hmf/cli.hpp"

int main(int argc, char** argv) { return hmf::run_cli(argc, argv); }
