// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cagewarp::cli {

/// Runs the command line tool. Returns 0 on success, 2 for flag errors and 1 for
/// runtime failures; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace cagewarp::cli
