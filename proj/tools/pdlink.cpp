#include "pdlink/cli.hpp"

int main(int argc, char** argv) { return pdlink::cli::main(argc, argv); }
