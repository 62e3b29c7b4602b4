// SPDX-License-Identifier: Apache-2.0

#include "geocov/cli.hpp"

int main(int argc, char** argv) { return geocov::run_cli(argc, argv); }
