#include "cli.hpp"

int main(int argc, char** argv) { return te::cli::run(argc, argv); }
