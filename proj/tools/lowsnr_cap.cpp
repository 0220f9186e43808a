#include "cli_app.hpp"

int main(int argc, char** argv) { return lowsnr::cli::run(argc, argv); }
