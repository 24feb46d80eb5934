#include "precs/cli.hpp"

int main(int argc, char** argv) { return precs::cli::run(argc, argv); }
