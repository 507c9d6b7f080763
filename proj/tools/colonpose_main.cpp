#include "colonpose/cli.hpp"

int main(int argc, char** argv) { return colonpose::run_cli(argc, argv); }
