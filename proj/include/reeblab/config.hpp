#pragma once

#include <string>
#include <vector>

#include "reeblab/surface.hpp"
#include "reeblab/surgery.hpp"

namespace reeblab {

// Full experiment description. Loaded from a single JSON file; unknown keys
// are rejected so that typos cannot silently change a run, and individual
// keys can be overridden with --set dotted.path=value.
struct ExperimentConfig {
  std::uint64_t rng_seed = 1;
  std::string output_dir = "out";
  int threads = 0;  // informational; LAB_THREADS caps the worker count

  FenchelNielsen surface;
  int discreteness_word_len = 10;

  SurgeryParams surgery;  // q, eta, epsilon, delta (profiles are built in)

  struct Census {
    double t_max = 8.0;
    std::size_t node_budget = 20000000;
    double fit_lo = 4.0;
    double fit_hi = 8.0;
    double grid_step = 0.5;
  } census;

  struct Entropy {
    std::vector<double> t_grid{3, 4, 5, 6, 7};
    std::vector<double> delta_grid{0.2, 0.1, 0.05};
    std::size_t sample_budget = 2500;
    double ball_radius = 0.025;
    double admission_margin = 0.5;
    double rescale_check = 2.0;
  } entropy;

  struct Orbits {
    std::size_t seeds = 24;
    double search_time = 40.0;
    double return_threshold = 0.05;
    std::size_t max_orbits = 400;
    double refine_tolerance = 1e-8;
  } orbits;

  struct Suspension {
    std::string matrix = "2 1\n1 1";
    int k_max = 12;
    double eps_form = 5e-4;
  } suspension;

  struct TorusDemo {
    double delta = 0.05;
  } torus_demo;

  static ExperimentConfig defaults() { return {}; }
  static ExperimentConfig from_file(const std::string& path,
                                    const std::vector<std::string>& overrides = {});
  static ExperimentConfig from_json_text(const std::string& text,
                                         const std::vector<std::string>& overrides = {});

  std::string canonical_json() const;  // deterministic dump used for hashing
  std::uint64_t hash() const { return fnv1a(canonical_json()); }
};

}  // namespace reeblab
