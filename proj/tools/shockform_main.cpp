#include "shockform/cli.hpp"

int main(int argc, char** argv) { return shockform::run_cli(argc, argv); }
