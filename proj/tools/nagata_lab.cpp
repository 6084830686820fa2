// nagata-lab: run one experiment config, or summarise result directories.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "nagata/harness.hpp"

namespace {

int run_command(const std::string& config_path, const std::string& out, const std::optional<std::uint64_t>& seed) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "cannot read config " << config_path << '\n';
    return nagata::kExitUsage;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    auto config = nagata::parse_config(buf.str());
    if (!out.empty()) config.out_dir = out;
    if (seed) config.seed = *seed;
    const auto report = nagata::run(config);
    for (const auto& c : report.criteria) {
      std::cout << c.id << ' ' << (c.pass ? "PASS" : "FAIL") << "  " << c.description;
      if (!c.detail.empty()) std::cout << "  (" << c.detail << ')';
      std::cout << '\n';
    }
    if (report.error) std::cerr << "run aborted: " << *report.error << '\n';
    return report.exit_code();
  } catch (const nagata::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return nagata::kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nagata-lab: experiments on metric dimension of complex sets"};
  app.require_subcommand(1);

  std::string config_path, out;
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "Run one experiment config");
  run->add_option("--config", config_path, "Config file (key = value lines)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "Output directory (overrides `out` in the config)");
  run->add_option("--seed", seed, "RNG seed (overrides `seed` in the config)");

  std::vector<std::string> dirs;
  std::string json_path;
  auto* summarize = app.add_subcommand("summarize", "Tabulate report.json files from result directories");
  summarize->add_option("dirs", dirs, "Result directories")->required();
  summarize->add_option("--json", json_path, "Also write the summary as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : nagata::kExitUsage;
  }

  if (*run) return run_command(config_path, out, seed);

  std::vector<std::filesystem::path> paths(dirs.begin(), dirs.end());
  const auto summary = nagata::emit_summary(paths);
  std::cout << summary.table;
  if (!json_path.empty()) {
    std::ofstream js(json_path);
    if (!js) {
      std::cerr << "cannot write " << json_path << '\n';
      return nagata::kExitUsage;
    }
    js << summary.json.dump(2) << '\n';
  }
  return summary.exit_code;
}
