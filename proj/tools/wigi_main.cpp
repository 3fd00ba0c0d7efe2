#include "wigi/pipeline.hpp"

int main(int argc, char** argv) { return wigi::pipeline::run_cli(argc, argv); }
