#include "nagata/harness.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include "nagata/complex_maps.hpp"
#include "nagata/errors.hpp"
#include "nagata/text.hpp"

namespace nagata {

namespace fs = std::filesystem;

namespace {

template <class F>
auto parse_or_config_error(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const DomainError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text_in) {
  ExperimentConfig config;
  std::set<std::string> seen;
  std::istringstream in(text_in);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected `key = value`");
    }
    const std::string key(text::trim(line.substr(0, eq)));
    const std::string value(text::trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (!seen.insert(key).second) throw ConfigError("line " + std::to_string(line_no) + ": duplicate key " + key);
    if (key == "experiment") {
      config.experiment = value;
    } else if (key == "out") {
      config.out_dir = value;
    } else if (key == "seed") {
      try {
        const long long s = text::parse_int(value);
        if (s < 0) throw ConfigError("seed must be non-negative");
        config.seed = static_cast<std::uint64_t>(s);
      } catch (const DomainError& e) {
        throw ConfigError(std::string("seed: ") + e.what());
      }
    } else {
      config.params[key] = value;
    }
  }
  if (config.experiment.empty()) throw ConfigError("config names no experiment");
  return config;
}

void validate_config(const ExperimentConfig& config) {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), config.experiment) == names.end()) {
    throw ConfigError("unknown experiment '" + config.experiment + "'");
  }
  const auto& defaults = experiment_defaults(config.experiment);
  for (const auto& [key, value] : config.params) {
    const auto it = defaults.find(key);
    if (it == defaults.end()) throw ConfigError("unknown key '" + key + "' for experiment " + config.experiment);
    // A value must have the shape of its default, so malformed input fails
    // before any artifact is written.
    const ParamBlock probe({{key, it->second}}, {});
    const ParamBlock given({{key, value}}, {});
    if (it->second == "true" || it->second == "false") {
      given.flag(key);
    } else if (key == "admissibility") {
      if (value != "per-block" && value != "common-side") throw ConfigError("admissibility must be per-block or common-side");
    } else if (key == "function") {
      try {
        parse_genus1(value);
      } catch (const std::exception& e) {
        throw ConfigError(std::string("function: ") + e.what());
      }
    } else if (key == "pc") {
      for (auto item : text::split(value, ',')) {
        const auto parts = text::split(text::trim(item), ':');
        if (parts.size() != 2) throw ConfigError("pc: expected p:c pairs");
        for (auto part : parts) parse_or_config_error(key, [&] { return text::parse_double(text::trim(part)); });
      }
    } else {
      const auto shape_of_default = [&](auto parse) {
        try {
          parse(probe);
          return true;
        } catch (const ConfigError&) {
          return false;
        }
      };
      if (shape_of_default([&](const ParamBlock& b) { b.integer(key); })) {
        given.integer(key);
      } else if (shape_of_default([&](const ParamBlock& b) { b.reals(key); })) {
        given.reals(key);
      }
    }
  }
}

ParamBlock::ParamBlock(std::map<std::string, std::string> defaults, const std::map<std::string, std::string>& given)
    : values_(std::move(defaults)) {
  for (const auto& [key, value] : given) {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown key '" + key + "'");
    it->second = value;
  }
}

const std::string& ParamBlock::text(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing key '" + key + "'");
  return it->second;
}

double ParamBlock::real(const std::string& key) const {
  return parse_or_config_error(key, [&] { return text::parse_double(text(key)); });
}

long long ParamBlock::integer(const std::string& key) const {
  return parse_or_config_error(key, [&] { return text::parse_int(text(key)); });
}

bool ParamBlock::flag(const std::string& key) const {
  const auto& v = text(key);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(key + ": expected true or false");
}

std::vector<double> ParamBlock::reals(const std::string& key) const {
  return parse_or_config_error(key, [&] {
    std::vector<double> out;
    for (auto item : text::split(text(key), ',')) out.push_back(text::parse_double(text::trim(item)));
    if (out.empty()) throw ConfigError(key + ": empty list");
    return out;
  });
}

void ArtifactSink::write(const std::string& name, const std::string& content) {
  std::ofstream out(dir_ / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
  out << content;
  out.close();
  if (!out) throw std::runtime_error("failed writing " + (dir_ / name).string());
  names_.push_back(name);
}

// ---------------------------------------------------------------------------

bool RunReport::all_pass() const {
  return !criteria.empty() && std::all_of(criteria.begin(), criteria.end(), [](const Criterion& c) { return c.pass; });
}

int RunReport::exit_code() const { return all_pass() ? kExitPass : kExitCriterion; }

nlohmann::json RunReport::to_json() const {
  nlohmann::json crit = nlohmann::json::array();
  for (const auto& c : criteria) {
    crit.push_back({{"id", c.id}, {"description", c.description}, {"pass", c.pass}, {"detail", c.detail}, {"values", c.values}, {"seconds", c.seconds}});
  }
  nlohmann::json j{{"experiment", experiment},
                   {"seed", seed},
                   {"params", params},
                   {"criteria", crit},
                   {"artifacts", artifacts},
                   {"wall_seconds", wall_seconds},
                   {"exit_code", exit_code()}};
  if (error) j["error"] = *error;
  return j;
}

RunReport RunReport::from_json(const nlohmann::json& j) {
  RunReport r;
  r.experiment = j.at("experiment").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.params = j.at("params").get<std::map<std::string, std::string>>();
  for (const auto& c : j.at("criteria")) {
    Criterion k;
    k.id = c.at("id").get<std::string>();
    k.description = c.value("description", "");
    k.pass = c.at("pass").get<bool>();
    k.detail = c.value("detail", "");
    k.values = c.value("values", nlohmann::json::object());
    k.seconds = c.value("seconds", 0.0);
    r.criteria.push_back(std::move(k));
  }
  r.artifacts = j.at("artifacts").get<std::vector<std::string>>();
  r.wall_seconds = j.value("wall_seconds", 0.0);
  if (j.contains("error")) r.error = j.at("error").get<std::string>();
  return r;
}

namespace {

std::vector<Criterion> dispatch(const std::string& name, const ParamBlock& block, std::uint64_t seed,
                                ArtifactSink* sink) {
  if (name == "exp-sequence") return run_exp_sequence(block, seed, sink);
  if (name == "half-lattice") return run_half_lattice(block, seed, sink);
  if (name == "picard-exp") return run_picard_exp(block, seed, sink);
  if (name == "thm17") return run_thm17(block, seed, sink);
  if (name == "spiral-porosity") return run_spiral_porosity(block, seed, sink);
  return run_covering_exponent(block, seed, sink);
}

// Criterion ids an experiment reports, used to mark all of them failed
// when the run aborts.
std::vector<std::string> criterion_ids(const std::string& name) {
  if (name == "exp-sequence") return {"AC1", "AC2"};
  if (name == "half-lattice") return {"AC4"};
  if (name == "picard-exp") return {"AC5"};
  if (name == "thm17") return {"AC3", "AC6"};
  if (name == "spiral-porosity") return {"AC7", "AC8"};
  return {"AC8"};
}

}  // namespace

RunReport run(const ExperimentConfig& config) {
  validate_config(config);
  const ParamBlock block(experiment_defaults(config.experiment), config.params);
  const fs::path dir = config.out_dir.empty() ? fs::path("out") / config.experiment : config.out_dir;
  fs::create_directories(dir);
  fs::remove(dir / "FAILED");

  RunReport report;
  report.experiment = config.experiment;
  report.seed = config.seed;
  report.params = block.values();
  ArtifactSink sink(dir);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    report.criteria = dispatch(config.experiment, block, config.seed, &sink);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    report.error = e.what();
    for (const auto& id : criterion_ids(config.experiment)) {
      Criterion c;
      c.id = id;
      c.description = "run aborted";
      c.detail = e.what();
      report.criteria.push_back(std::move(c));
    }
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report.artifacts = sink.names();
  if (!report.all_pass()) {
    std::ofstream marker(dir / "FAILED");
    marker << (report.error ? *report.error : std::string("criterion failure")) << '\n';
  }
  std::ofstream(dir / "report.json") << report.to_json().dump(2) << '\n';
  return report;
}

// ---------------------------------------------------------------------------

namespace {

int severity(int code) {
  switch (code) {
    case kExitPass:
      return 0;
    case kExitCriterion:
      return 1;
    default:
      return 2;
  }
}

int worst(int a, int b) { return severity(a) >= severity(b) ? a : b; }

}  // namespace

Summary emit_summary(const std::vector<std::pair<std::string, RunReport>>& reports_in) {
  auto reports = reports_in;
  std::stable_sort(reports.begin(), reports.end(), [](const auto& a, const auto& b) {
    return std::tie(a.second.experiment, a.first) < std::tie(b.second.experiment, b.first);
  });
  Summary out;
  out.json = nlohmann::json::array();
  std::vector<std::array<std::string, 5>> rows;
  rows.push_back({"experiment", "status", "criteria", "artifacts", "source"});
  for (const auto& [source, r] : reports) {
    const int code = r.experiment.empty() ? kExitUsage : r.exit_code();
    out.exit_code = worst(out.exit_code, code);
    std::string crit;
    for (const auto& c : r.criteria) crit += (crit.empty() ? "" : " ") + c.id + (c.pass ? ":PASS" : ":FAIL");
    const bool no_artifacts = r.artifacts.empty();
    const std::string status = code == kExitPass ? "PASS" : code == kExitCriterion ? "FAIL" : "ERROR";
    rows.push_back({r.experiment.empty() ? "?" : r.experiment, status, crit.empty() ? "-" : crit,
                    no_artifacts ? "NONE (flagged)" : std::to_string(r.artifacts.size()), source});
    nlohmann::json crit_json = nlohmann::json::array();
    for (const auto& c : r.criteria) crit_json.push_back({{"id", c.id}, {"pass", c.pass}});
    out.json.push_back({{"source", source},
                        {"experiment", r.experiment},
                        {"status", status},
                        {"exit_code", code},
                        {"criteria", crit_json},
                        {"artifact_count", r.artifacts.size()},
                        {"no_artifacts", no_artifacts}});
  }
  std::array<std::size_t, 5> width{};
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  std::ostringstream table;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      table << row[i];
      if (i + 1 < row.size()) table << std::string(width[i] - row[i].size() + 2, ' ');
    }
    table << '\n';
  }
  out.table = table.str();
  out.json = nlohmann::json{{"runs", out.json}, {"exit_code", out.exit_code}};
  return out;
}

Summary emit_summary(const std::vector<fs::path>& dirs) {
  std::vector<std::pair<std::string, RunReport>> reports;
  for (const auto& d : dirs) {
    RunReport r;
    try {
      std::ifstream in(d / "report.json");
      if (in) r = RunReport::from_json(nlohmann::json::parse(in));
    } catch (const std::exception&) {
      r = RunReport{};
    }
    reports.emplace_back(d.string(), std::move(r));
  }
  return emit_summary(reports);
}

}  // namespace nagata
