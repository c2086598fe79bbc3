#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "shadowtrack/harness.hpp"

namespace fixtures {

inline std::filesystem::path data_dir() { return SHADOWTRACK_DATA_DIR; }

inline std::filesystem::path default_config_path() { return data_dir() / "nyc_default.json"; }

/// The shipped scenario with the particle budget cut down for fast tests.
inline shadowtrack::harness::ScenarioConfig light_config(std::size_t particles = 300) {
  auto c = shadowtrack::harness::load_config(default_config_path());
  c.filter_params.num_particles = particles;
  c.filter_params.num_birth = particles;
  return c;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("shadowtrack-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
}

}  // namespace fixtures
