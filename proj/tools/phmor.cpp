// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "phmor/cli/commands.hpp"

int main(int argc, char **argv)
{
  return phmor::cli::run_cli(argc, argv, std::cout, std::cerr);
}
