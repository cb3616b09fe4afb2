#include "lietrans/cli.hpp"

int main(int argc, char** argv) { return lietrans::cli::run(argc, argv); }
