#include "vkm/cli.hpp"

int main(int argc, char** argv) { return vkm::run_cli(argc, argv); }
