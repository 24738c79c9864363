#include "cli_app.hpp"

int main(int argc, char** argv) { return lssmor::cli::run(argc, argv); }
