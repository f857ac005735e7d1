#include "prophetlab/json_io.hpp"

int main(int argc, char** argv) { return prophetlab::dispatch(argc, argv); }
