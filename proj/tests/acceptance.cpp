// Verification driver: runs every acceptance check at its stated tolerance
// and prints one pass/fail line per criterion.
#include <cstdio>
#include <filesystem>

#include "reeblab/lab.hpp"

int main() {
  using namespace reeblab;
  ExperimentConfig cfg = ExperimentConfig::defaults();
  cfg.output_dir =
      (std::filesystem::temp_directory_path() / "reeblab_acceptance").string();
  std::filesystem::remove_all(cfg.output_dir);
  Lab lab(cfg);
  auto checks = lab.acceptance(true);
  bool all = true;
  for (const auto& c : checks) {
    std::printf("[%s] %s: %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                c.details.c_str());
    all = all && c.pass;
  }
  std::printf("%zu checks, %s\n", checks.size(), all ? "all passed" : "FAILURES");
  return all ? 0 : 1;
}
