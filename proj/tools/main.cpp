#include "commands.hpp"

int main(int argc, char** argv) { return relsen::cli::main_entry(argc, argv); }
