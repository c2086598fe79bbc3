#pragma once

#include "shadowtrack/harness.hpp"

namespace bench {

// The shipped scenario, prepared once per process.
inline const shadowtrack::harness::Scenario& default_scenario() {
  static const auto s = shadowtrack::harness::prepare_scenario(
      shadowtrack::harness::load_config(std::filesystem::path(SHADOWTRACK_DATA_DIR) / "nyc_default.json"));
  return s;
}

}  // namespace bench
