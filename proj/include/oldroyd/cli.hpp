// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace oldroyd::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsageError = 2, kDiverged = 3 };

// Runs one subcommand. `args` excludes the program name. Output is
// line-delimited JSON on `out`; errors go to `err` as JSON as well.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace oldroyd::cli
