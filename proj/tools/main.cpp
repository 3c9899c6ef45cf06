// Copyright 2026 The Hyperspline Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) { return hyperspline::cli::run(argc, argv, std::cout, std::cerr); }
