#include "tmlog/cli.hpp"

int main(int argc, char** argv) { return tmlog::run(argc, argv); }
