// SPDX-License-Identifier: Apache-2.0
#include "oldroyd/cli.hpp"

int main(int argc, char** argv) { return oldroyd::cli::main(argc, argv); }
