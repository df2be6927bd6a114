#include "circlewalk/cli.hpp"

int main(int argc, char** argv) { return circlewalk::cli::main(argc, argv); }
