#include "desparsify/cli_runner.hpp"

int main(int argc, char** argv) { return dsp::run_cli(argc, argv); }
