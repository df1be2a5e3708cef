// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "oldroyd/types.hpp"

namespace oldroyd {

struct SuiteResult {
  std::string suite;
  std::uint64_t seed = 0;
  int cases = 0;
  Scalar max_residual = 0;
  Scalar threshold = 0;
  bool pass = false;
};

// Names accepted by run_suite.
const std::vector<std::string>& suite_names();

// Runs a named randomized property suite. Throws ConfigError for unknown names.
SuiteResult run_suite(const std::string& name, std::uint64_t seed);

nlohmann::json to_json(const SuiteResult& r);

}  // namespace oldroyd
