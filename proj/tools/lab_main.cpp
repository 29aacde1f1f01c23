#include <CLI11.hpp>
#include <cstdio>
#include <json.hpp>

#include "reeblab/lab.hpp"

int main(int argc, char** argv) {
  CLI::App app{"reeblab: geodesic and surgered Reeb flow laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string subcommand;
  for (const char* name :
       {"census", "entropy", "surgery", "suspend", "verify", "demo-torus"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config file (JSON)");
    sub->add_option("--set", overrides,
                    "override a config key, e.g. --set surgery.q=2");
    sub->callback([&subcommand, name]() { subcommand = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    reeblab::ExperimentConfig cfg =
        config_path.empty()
            ? reeblab::ExperimentConfig::from_json_text("{}", overrides)
            : reeblab::ExperimentConfig::from_file(config_path, overrides);
    reeblab::Lab lab(cfg);
    return lab.run(subcommand);
  } catch (const reeblab::LabError& e) {
    nlohmann::json err{{"error", reeblab::error_code_name(e.code())},
                       {"message", e.what()}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return e.code() == reeblab::ErrorCode::ConfigError ||
                   e.code() == reeblab::ErrorCode::IOError
               ? 2
               : 1;
  } catch (const std::exception& e) {
    nlohmann::json err{{"error", "Unexpected"}, {"message", e.what()}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 1;
  }
}
