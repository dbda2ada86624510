#include "pemix/cli.hpp"

int main(int argc, char** argv) { return pemix::cli::run(argc, argv); }
