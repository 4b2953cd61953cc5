// Copyright 2026 The gsw Authors
// SPDX-License-Identifier: Apache-2.0

#include "gsw/cli.hpp"

int main(int argc, char** argv) { return gsw::cli::run(argc, argv); }
