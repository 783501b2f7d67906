#include "commands.hpp"

int main(int argc, char** argv) { return qthermo::cli::run(argc, argv); }
