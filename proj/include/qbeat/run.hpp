#pragma once

#include <filesystem>
#include <vector>

#include "qbeat/scenario.hpp"

namespace qbeat {

struct RunResult {
  std::vector<std::filesystem::path> outputs;
};

/// Dispatch a validated scenario to the matching pipeline and emit its files.
/// The manifest is written last so its presence marks a complete run.
RunResult run(const Scenario& scenario);

}  // namespace qbeat
