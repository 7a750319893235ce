#include "nlpw/cli.hpp"

int main(int argc, char** argv) { return nlpw::cli::run(argc, argv); }
