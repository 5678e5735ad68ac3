#include "hsde/cli.hpp"

int main(int argc, char** argv) { return hsde::run_command(std::vector<std::string>(argv + 1, argv + argc)); }
