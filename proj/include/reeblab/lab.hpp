#pragma once

#include <memory>
#include <optional>

#include "reeblab/census.hpp"
#include "reeblab/config.hpp"
#include "reeblab/entropy.hpp"
#include "reeblab/homotopy.hpp"
#include "reeblab/suspension.hpp"

namespace reeblab {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string details;
};

// Orchestrates the pipeline: census -> flow -> homotopy -> entropy ->
// verification. Owns all file writes; modules stay pure. Construction is
// cheap, heavyweight objects are built lazily and cached.
class Lab {
 public:
  explicit Lab(ExperimentConfig cfg);
  ~Lab();

  const ExperimentConfig& config() const { return cfg_; }

  const FuchsianSurface& surface();
  const CensusTable& census();
  const SurgeredFlow& flow();
  const std::vector<SurgeredOrbit>& orbits();

  // Subcommands; each writes its artifacts into output_dir and appends a
  // run record to the manifest. Unknown names are a usage error.
  int run(const std::string& subcommand);

  // The named verification checks; run by the verify subcommand and by the
  // standalone verification binary.
  std::vector<CheckResult> acceptance(bool emit_artifacts = true);

  // Artifact emission used by verify and by the reproducibility check.
  std::vector<std::string> write_data_artifacts(const std::string& dir);
  std::vector<std::string> write_data_artifacts(
      const std::string& dir, const std::vector<std::string>& groups);

 private:
  int run_census();
  int run_entropy();
  int run_surgery();
  int run_suspend();
  int run_demo_torus();
  int run_verify();

  void append_manifest(const std::string& subcommand,
                       const std::vector<std::string>& artifacts,
                       const std::vector<CheckResult>& checks);
  void write_report(const std::vector<CheckResult>& checks);

  ExperimentConfig cfg_;
  std::optional<FuchsianSurface> surface_;
  std::optional<CensusTable> census_;
  std::unique_ptr<SurgeredFlow> flow_;
  std::optional<std::vector<SurgeredOrbit>> orbits_;
  std::optional<EntropyEstimate> entropy_;
  std::optional<GrowthFit> census_fit_;
};

}  // namespace reeblab
