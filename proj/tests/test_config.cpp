#include <doctest.h>

#include "reeblab/config.hpp"

using namespace reeblab;

TEST_CASE("defaults and parsing") {
  ExperimentConfig cfg = ExperimentConfig::from_json_text("{}");
  CHECK(cfg.surgery.q == 1);
  CHECK(cfg.census.t_max == doctest::Approx(8.0));

  ExperimentConfig loaded = ExperimentConfig::from_json_text(R"({
    "rng_seed": 7,
    "surgery": {"q": -2, "eta": 0.08},
    "census": {"t_max": 6.5, "fit_window": [3.0, 6.0]}
  })");
  CHECK(loaded.rng_seed == 7);
  CHECK(loaded.surgery.q == -2);
  CHECK(loaded.surgery.eta == doctest::Approx(0.08));
  CHECK(loaded.census.fit_lo == doctest::Approx(3.0));
}

TEST_CASE("unknown keys are rejected") {
  CHECK_THROWS_AS((void)ExperimentConfig::from_json_text(R"({"typo_key": 1})"),
                  LabError);
  CHECK_THROWS_AS(
      (void)ExperimentConfig::from_json_text(R"({"surgery": {"qq": 1}})"),
      LabError);
}

TEST_CASE("malformed input") {
  CHECK_THROWS_AS((void)ExperimentConfig::from_json_text("not json at all"),
                  LabError);
  CHECK_THROWS_AS(
      (void)ExperimentConfig::from_json_text(R"({"census": {"fit_window": [1]}})"),
      LabError);
}

TEST_CASE("overrides") {
  ExperimentConfig cfg =
      ExperimentConfig::from_json_text("{}", {"surgery.q=2", "rng_seed=99"});
  CHECK(cfg.surgery.q == 2);
  CHECK(cfg.rng_seed == 99);

  // cross-field contracts are enforced at load: q = 3 pushes the fibre
  // bound below the default epsilon
  CHECK_THROWS_AS((void)ExperimentConfig::from_json_text("{}", {"surgery.q=3"}),
                  LabError);
  ExperimentConfig ok = ExperimentConfig::from_json_text(
      "{}", {"surgery.q=3", "surgery.epsilon=0.002"});
  CHECK(ok.surgery.q == 3);

  ExperimentConfig text = ExperimentConfig::from_json_text(
      "{}", {"output_dir=some/dir", "suspension.matrix=1 1\n1 1"});
  CHECK(text.output_dir == "some/dir");

  CHECK_THROWS_AS((void)ExperimentConfig::from_json_text("{}", {"no_equals"}),
                  LabError);
  CHECK_THROWS_AS(
      (void)ExperimentConfig::from_json_text("{}", {"bogus.key=1"}),
      LabError);
}

TEST_CASE("canonical form is stable") {
  ExperimentConfig a = ExperimentConfig::from_json_text("{}");
  ExperimentConfig b = ExperimentConfig::from_json_text(R"({"rng_seed": 1})");
  CHECK(a.canonical_json() == b.canonical_json());
  CHECK(a.hash() == b.hash());
  ExperimentConfig c = ExperimentConfig::from_json_text(R"({"rng_seed": 2})");
  CHECK(a.hash() != c.hash());
}
