#include "pellconcat/cli.hpp"

int main(int argc, char** argv) { return pellconcat::run_cli(argc, argv); }
