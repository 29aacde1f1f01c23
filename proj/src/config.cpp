#include "reeblab/config.hpp"

#include "reeblab/suspension.hpp"

#include <fstream>
#include <json.hpp>

namespace reeblab {

using nlohmann::json;

namespace {

json schema_skeleton() {
  // keys only; used to reject unknown entries
  return json{
      {"rng_seed", 0},
      {"output_dir", ""},
      {"threads", 0},
      {"surface",
       {{"handle1", {{"tr_a", 0.0}, {"tr_b", 0.0}, {"tr_ab", 0.0}}},
        {"handle2", {{"tr_a", 0.0}, {"tr_b", 0.0}, {"tr_ab", 0.0}}},
        {"twist", 0.0},
        {"discreteness_word_len", 0}}},
      {"surgery", {{"q", 0}, {"eta", 0.0}, {"epsilon", 0.0}, {"delta", 0.0}}},
      {"census",
       {{"t_max", 0.0},
        {"node_budget", 0},
        {"fit_window", json::array()},
        {"grid_step", 0.0}}},
      {"entropy",
       {{"t_grid", json::array()},
        {"delta_grid", json::array()},
        {"sample_budget", 0},
        {"ball_radius", 0.0},
        {"admission_margin", 0.0},
        {"rescale_check", 0.0}}},
      {"orbits",
       {{"seeds", 0},
        {"search_time", 0.0},
        {"return_threshold", 0.0},
        {"max_orbits", 0},
        {"refine_tolerance", 0.0}}},
      {"suspension", {{"matrix", ""}, {"k_max", 0}, {"eps_form", 0.0}}},
      {"torus_demo", {{"delta", 0.0}}},
  };
}

void reject_unknown_keys(const json& value, const json& schema,
                         const std::string& prefix) {
  if (!value.is_object()) return;
  for (auto it = value.begin(); it != value.end(); ++it) {
    std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!schema.is_object() || !schema.contains(it.key()))
      fail(ErrorCode::ConfigError, "unknown config key: " + path);
    reject_unknown_keys(it.value(), schema[it.key()], path);
  }
}

json parse_override_value(const std::string& text) {
  json parsed = json::parse(text, nullptr, false);
  if (parsed.is_discarded()) return json(text);  // plain string
  return parsed;
}

void apply_override(json& root, const std::string& spec) {
  auto eq = spec.find('=');
  if (eq == std::string::npos)
    fail(ErrorCode::ConfigError, "--set expects key.path=value, got: " + spec);
  std::string path = spec.substr(0, eq);
  json value = parse_override_value(spec.substr(eq + 1));
  json* node = &root;
  std::size_t pos = 0;
  for (;;) {
    auto dot = path.find('.', pos);
    std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
    if (key.empty()) fail(ErrorCode::ConfigError, "empty key in --set path");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    pos = dot + 1;
  }
}

template <typename T>
void load(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

ExperimentConfig from_json(const json& j) {
  reject_unknown_keys(j, schema_skeleton(), "");
  ExperimentConfig cfg;
  load(j, "rng_seed", cfg.rng_seed);
  load(j, "output_dir", cfg.output_dir);
  load(j, "threads", cfg.threads);
  if (j.contains("surface")) {
    const json& s = j.at("surface");
    auto handle = [&](const char* key, HandleTraces& h) {
      if (!s.contains(key)) return;
      const json& hj = s.at(key);
      load(hj, "tr_a", h.tr_a);
      load(hj, "tr_b", h.tr_b);
      load(hj, "tr_ab", h.tr_ab);
    };
    handle("handle1", cfg.surface.handle1);
    handle("handle2", cfg.surface.handle2);
    load(s, "twist", cfg.surface.twist);
    load(s, "discreteness_word_len", cfg.discreteness_word_len);
  }
  if (j.contains("surgery")) {
    const json& s = j.at("surgery");
    load(s, "q", cfg.surgery.q);
    load(s, "eta", cfg.surgery.eta);
    load(s, "epsilon", cfg.surgery.epsilon);
    load(s, "delta", cfg.surgery.delta);
  }
  if (j.contains("census")) {
    const json& s = j.at("census");
    load(s, "t_max", cfg.census.t_max);
    load(s, "node_budget", cfg.census.node_budget);
    if (s.contains("fit_window")) {
      auto w = s.at("fit_window").get<std::vector<double>>();
      if (w.size() != 2) fail(ErrorCode::ConfigError, "fit_window needs two entries");
      cfg.census.fit_lo = w[0];
      cfg.census.fit_hi = w[1];
    }
    load(s, "grid_step", cfg.census.grid_step);
  }
  if (j.contains("entropy")) {
    const json& s = j.at("entropy");
    load(s, "t_grid", cfg.entropy.t_grid);
    load(s, "delta_grid", cfg.entropy.delta_grid);
    load(s, "sample_budget", cfg.entropy.sample_budget);
    load(s, "ball_radius", cfg.entropy.ball_radius);
    load(s, "admission_margin", cfg.entropy.admission_margin);
    load(s, "rescale_check", cfg.entropy.rescale_check);
  }
  if (j.contains("orbits")) {
    const json& s = j.at("orbits");
    load(s, "seeds", cfg.orbits.seeds);
    load(s, "search_time", cfg.orbits.search_time);
    load(s, "return_threshold", cfg.orbits.return_threshold);
    load(s, "max_orbits", cfg.orbits.max_orbits);
    load(s, "refine_tolerance", cfg.orbits.refine_tolerance);
  }
  if (j.contains("suspension")) {
    const json& s = j.at("suspension");
    load(s, "matrix", cfg.suspension.matrix);
    load(s, "k_max", cfg.suspension.k_max);
    load(s, "eps_form", cfg.suspension.eps_form);
  }
  if (j.contains("torus_demo")) {
    load(j.at("torus_demo"), "delta", cfg.torus_demo.delta);
  }

  // every module validates its slice up front
  validate_params(cfg.surgery);
  if (!(cfg.census.t_max > 0 && cfg.census.t_max <= 12.0))
    fail(ErrorCode::ConfigError, "census.t_max must lie in (0, 12]");
  if (cfg.entropy.t_grid.empty() || cfg.entropy.delta_grid.empty())
    fail(ErrorCode::ConfigError, "entropy grids must be non-empty");
  for (double d : cfg.entropy.delta_grid)
    if (!(d > 0)) fail(ErrorCode::ConfigError, "entropy deltas must be positive");
  if (cfg.suspension.k_max < 1 || cfg.suspension.k_max > 20)
    fail(ErrorCode::ConfigError, "suspension.k_max must lie in [1, 20]");
  (void)parse_transition_matrix(cfg.suspension.matrix);
  if (!(cfg.torus_demo.delta > 0))
    fail(ErrorCode::ConfigError, "torus_demo.delta must be positive");
  if (!(cfg.surface.handle1.boundary_trace() < -2.0 - 1e-9) ||
      !(cfg.surface.handle2.boundary_trace() < -2.0 - 1e-9))
    fail(ErrorCode::ConfigError, "handle traces do not give geodesic boundaries");
  return cfg;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(
    const std::string& text, const std::vector<std::string>& overrides) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    fail(ErrorCode::ConfigError, "config file is not valid JSON");
  for (const auto& spec : overrides) apply_override(j, spec);
  return from_json(j);
}

ExperimentConfig ExperimentConfig::from_file(
    const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IOError, "cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return from_json_text(text, overrides);
}

std::string ExperimentConfig::canonical_json() const {
  json j{
      {"rng_seed", rng_seed},
      {"output_dir", output_dir},
      {"threads", threads},
      {"surface",
       {{"handle1",
         {{"tr_a", surface.handle1.tr_a},
          {"tr_b", surface.handle1.tr_b},
          {"tr_ab", surface.handle1.tr_ab}}},
        {"handle2",
         {{"tr_a", surface.handle2.tr_a},
          {"tr_b", surface.handle2.tr_b},
          {"tr_ab", surface.handle2.tr_ab}}},
        {"twist", surface.twist},
        {"discreteness_word_len", discreteness_word_len}}},
      {"surgery",
       {{"q", surgery.q},
        {"eta", surgery.eta},
        {"epsilon", surgery.epsilon},
        {"delta", surgery.delta}}},
      {"census",
       {{"t_max", census.t_max},
        {"node_budget", census.node_budget},
        {"fit_window", {census.fit_lo, census.fit_hi}},
        {"grid_step", census.grid_step}}},
      {"entropy",
       {{"t_grid", entropy.t_grid},
        {"delta_grid", entropy.delta_grid},
        {"sample_budget", entropy.sample_budget},
        {"ball_radius", entropy.ball_radius},
        {"admission_margin", entropy.admission_margin},
        {"rescale_check", entropy.rescale_check}}},
      {"orbits",
       {{"seeds", orbits.seeds},
        {"search_time", orbits.search_time},
        {"return_threshold", orbits.return_threshold},
        {"max_orbits", orbits.max_orbits},
        {"refine_tolerance", orbits.refine_tolerance}}},
      {"suspension",
       {{"matrix", suspension.matrix},
        {"k_max", suspension.k_max},
        {"eps_form", suspension.eps_form}}},
      {"torus_demo", {{"delta", torus_demo.delta}}},
  };
  return j.dump(2);
}

}  // namespace reeblab
