#include "gsma/cli_app.hpp"

int main(int argc, char** argv) { return gsma::run_cli(argc, argv); }
