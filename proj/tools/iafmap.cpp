#include "iaf/cli.hpp"

int main(int argc, char** argv) { return iaf::run(argc, argv); }
