#include "bimod/app.hpp"

int main(int argc, char** argv) { return bimod::run_cli(argc, argv); }
