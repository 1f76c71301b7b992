// SPDX-License-Identifier: Apache-2.0
#include "cagewarp/cli.hpp"

int main(int argc, char** argv) { return cagewarp::cli::run(argc, argv); }
