#pragma once

// Reproducible experiments over the library: flat `key = value` configs,
// CSV/JSON artifacts, per-criterion verdicts and exit codes
// (0 all pass, 2 a criterion failed, 1 usage or config error).

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nagata/metric_core.hpp"

namespace nagata {

class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitCriterion = 2;

struct ExperimentConfig {
  std::string experiment;
  std::map<std::string, std::string> params;
  std::filesystem::path out_dir;
  std::uint64_t seed = 1;
};

// One `key = value` per line; `#` starts a comment line. Reserved keys:
// experiment, out, seed. Duplicate keys are rejected; unknown keys are
// rejected by validate_config.
ExperimentConfig parse_config(const std::string& text);

// Experiment name known and every parameter key recognised.
void validate_config(const ExperimentConfig& config);

const std::vector<std::string>& experiment_names();

// Parameter values with the experiment defaults filled in.
class ParamBlock {
 public:
  ParamBlock(std::map<std::string, std::string> defaults, const std::map<std::string, std::string>& given);

  double real(const std::string& key) const;
  long long integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;  // comma list

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

struct Criterion {
  std::string id;  // AC1..AC9
  std::string description;
  bool pass = false;
  std::string detail;
  nlohmann::json values = nlohmann::json::object();
  double seconds = 0.0;  // wall time spent on this criterion alone
};

// Writes files into one directory and remembers their names in order.
class ArtifactSink {
 public:
  explicit ArtifactSink(std::filesystem::path dir) : dir_(std::move(dir)) {}
  void write(const std::string& name, const std::string& content);
  const std::vector<std::string>& names() const { return names_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> names_;
};

// Experiments; `sink` may be null, in which case nothing is written.
std::vector<Criterion> run_exp_sequence(const ParamBlock& p, std::uint64_t seed, ArtifactSink* sink);
std::vector<Criterion> run_half_lattice(const ParamBlock& p, std::uint64_t seed, ArtifactSink* sink);
std::vector<Criterion> run_picard_exp(const ParamBlock& p, std::uint64_t seed, ArtifactSink* sink);
std::vector<Criterion> run_thm17(const ParamBlock& p, std::uint64_t seed, ArtifactSink* sink);
std::vector<Criterion> run_spiral_porosity(const ParamBlock& p, std::uint64_t seed, ArtifactSink* sink);
std::vector<Criterion> run_covering_exponent(const ParamBlock& p, std::uint64_t seed, ArtifactSink* sink);

// Defaults of a named experiment, with all its recognised keys.
const std::map<std::string, std::string>& experiment_defaults(const std::string& name);

// Runs an experiment without artifacts (config keys over defaults).
std::vector<Criterion> run_criteria(const std::string& name, const std::map<std::string, std::string>& params,
                                    std::uint64_t seed);

// The first `count` points (a/q, b/q) of [0,1]^2 \ {0}, in lowest terms,
// ordered by q, then a, then b.
std::vector<Complex> rational_unit_square(std::size_t count);

struct RunReport {
  std::string experiment;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> params;
  std::vector<Criterion> criteria;
  std::vector<std::string> artifacts;
  double wall_seconds = 0.0;
  std::optional<std::string> error;  // exception text when the run aborted

  bool all_pass() const;
  int exit_code() const;
  nlohmann::json to_json() const;
  static RunReport from_json(const nlohmann::json& j);
};

// Validates, creates out_dir, runs, writes report.json (plus a FAILED
// marker unless every criterion passed). Throws ConfigError before touching
// the filesystem when the config is invalid.
RunReport run(const ExperimentConfig& config);

struct Summary {
  std::string table;
  nlohmann::json json;
  int exit_code = kExitPass;
};

// Rows ordered by experiment, then directory. A directory without a
// readable report.json counts as a usage error; exit code is the worst of
// the rows (1 over 2 over 0).
Summary emit_summary(const std::vector<std::filesystem::path>& dirs);
Summary emit_summary(const std::vector<std::pair<std::string, RunReport>>& reports);

}  // namespace nagata
