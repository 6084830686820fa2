#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "nagata/harness.hpp"

using namespace nagata;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("nagata_harness_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ExperimentConfig config(std::string experiment, std::map<std::string, std::string> params, fs::path out,
                        std::uint64_t seed = 1) {
  ExperimentConfig c;
  c.experiment = std::move(experiment);
  c.params = std::move(params);
  c.out_dir = std::move(out);
  c.seed = seed;
  return c;
}

// A small seeded spiral run; every CSV depends on the seed.
const std::map<std::string, std::string> kSmallSpiral{
    {"alphas", "4"}, {"k_extra", "20"}, {"k0_sweep", "8, 16"}, {"probes", "8"}, {"candidate_spacing", "0.1"}};

Criterion verdict(std::string id, bool pass) {
  Criterion c;
  c.id = std::move(id);
  c.pass = pass;
  return c;
}

RunReport report(std::string experiment, std::vector<Criterion> criteria, std::vector<std::string> artifacts) {
  RunReport r;
  r.experiment = std::move(experiment);
  r.criteria = std::move(criteria);
  r.artifacts = std::move(artifacts);
  return r;
}

int shell(const std::string& cmd) {
  const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config text parsing") {
  const auto c = parse_config(
      "# comment\n"
      "experiment = half-lattice\n"
      "\n"
      "  k_max=12  \n"
      "seed = 42\n"
      "out = /tmp/x\n");
  CHECK(c.experiment == "half-lattice");
  CHECK(c.seed == 42);
  CHECK(c.out_dir == "/tmp/x");
  CHECK(c.params == std::map<std::string, std::string>{{"k_max", "12"}});

  CHECK_THROWS_AS(parse_config("experiment = thm17\nexperiment = thm17\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("experiment = thm17\nk_max 12\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("k_max = 12\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("experiment = thm17\nseed = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("experiment = thm17\nseed = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("experiment = thm17\n = 3\n"), ConfigError);
}

TEST_CASE("config validation rejects unknown names and malformed values") {
  CHECK_NOTHROW(validate_config(config("thm17", {{"n_max", "6"}}, {})));
  CHECK_THROWS_AS(validate_config(config("thm18", {}, {})), ConfigError);
  CHECK_THROWS_AS(validate_config(config("thm17", {{"n_maximum", "6"}}, {})), ConfigError);
  CHECK_THROWS_AS(validate_config(config("thm17", {{"n_max", "6.5"}}, {})), ConfigError);
  CHECK_THROWS_AS(validate_config(config("thm17", {{"epsilon", "small"}}, {})), ConfigError);
  CHECK_THROWS_AS(validate_config(config("thm17", {{"gate_on_tail_index", "maybe"}}, {})), ConfigError);
  CHECK_THROWS_AS(validate_config(config("thm17", {{"admissibility", "both"}}, {})), ConfigError);
  CHECK_THROWS_AS(validate_config(config("thm17", {{"function", "m=1, q=0,1, zeros=cubic"}}, {})), ConfigError);
  CHECK_THROWS_AS(validate_config(config("spiral-porosity", {{"pc", "1:0.1, 2"}}, {})), ConfigError);
  CHECK_THROWS_AS(validate_config(config("exp-sequence", {{"lambda", "2,,3"}}, {})), ConfigError);
  CHECK_NOTHROW(validate_config(config("exp-sequence", {{"lambda", "3, 4"}}, {})));
}

TEST_CASE("every experiment has defaults and reports only known criteria") {
  const std::set<std::string> known{"AC1", "AC2", "AC3", "AC4", "AC5", "AC6", "AC7", "AC8", "AC9"};
  CHECK(experiment_names().size() == 6);
  for (const auto& name : experiment_names()) CHECK_FALSE(experiment_defaults(name).empty());
  for (const auto& name : {"exp-sequence", "half-lattice", "picard-exp"}) {
    for (const auto& c : run_criteria(name, {}, 1)) {
      CHECK(known.count(c.id) == 1);
      CHECK(c.pass);
    }
  }
  for (const auto& c : run_criteria("spiral-porosity", kSmallSpiral, 1)) CHECK(known.count(c.id) == 1);
}

TEST_CASE("unknown experiment fails before touching the filesystem") {
  const auto dir = fresh_dir("unknown");
  CHECK_THROWS_AS(run(config("thm18", {}, dir)), ConfigError);
  CHECK_FALSE(fs::exists(dir));
  CHECK_THROWS_AS(run(config("thm17", {{"epsilon", "x"}}, dir)), ConfigError);
  CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("exp-sequence run writes its artifacts and a passing report") {
  const auto dir = fresh_dir("exp");
  const auto r = run(config("exp-sequence", {}, dir));
  CHECK(r.exit_code() == kExitPass);
  CHECK(r.artifacts == std::vector<std::string>{"points.csv", "covers.csv", "ultrametric.csv"});
  for (const auto& a : r.artifacts) CHECK(fs::file_size(dir / a) > 0);
  CHECK_FALSE(fs::exists(dir / "FAILED"));
  const auto back = RunReport::from_json(nlohmann::json::parse(slurp(dir / "report.json")));
  CHECK(back.experiment == "exp-sequence");
  CHECK(back.artifacts == r.artifacts);
  REQUIRE(back.criteria.size() == 2);
  CHECK(back.criteria[0].id == "AC1");
  CHECK(back.criteria[1].id == "AC2");
  CHECK(back.params.at("points") == "30");
  CHECK(slurp(dir / "covers.csv").rfind("lambda,s,blocks,max_diameter,bound,multiplicity,exact,pass\n", 0) == 0);
}

TEST_CASE("same config and seed give byte-identical artifacts") {
  const auto a = fresh_dir("det_a"), b = fresh_dir("det_b"), c = fresh_dir("det_c");
  const auto ra = run(config("spiral-porosity", kSmallSpiral, a, 7));
  const auto rb = run(config("spiral-porosity", kSmallSpiral, b, 7));
  const auto rc = run(config("spiral-porosity", kSmallSpiral, c, 8));
  REQUIRE(ra.artifacts == rb.artifacts);
  for (const auto& name : ra.artifacts) CHECK(slurp(a / name) == slurp(b / name));
  CHECK(slurp(a / "rays.csv") != slurp(c / "rays.csv"));

  const std::map<std::string, std::string> small_thm{{"n_max", "6"}, {"radial_polys", "3"}};
  const auto ta = fresh_dir("det_ta"), tb = fresh_dir("det_tb");
  const auto sa = run(config("thm17", small_thm, ta, 3));
  run(config("thm17", small_thm, tb, 3));
  for (const auto& name : sa.artifacts)
    if (name.ends_with(".csv")) CHECK(slurp(ta / name) == slurp(tb / name));
}

TEST_CASE("a failed criterion exits 2 and leaves a FAILED marker") {
  const auto dir = fresh_dir("fail");
  const auto r = run(config("covering-exponent", {{"k0_sweep", "8"}, {"s_hat_min", "1.99"}}, dir));
  CHECK(r.exit_code() == kExitCriterion);
  CHECK(fs::exists(dir / "FAILED"));
  // A rerun that passes clears the marker.
  const auto ok = run(config("covering-exponent", {{"k0_sweep", "8"}, {"s_hat_min", "1"}}, dir));
  CHECK(ok.exit_code() == kExitPass);
  CHECK_FALSE(fs::exists(dir / "FAILED"));
}

TEST_CASE("an aborted run marks its criteria failed and keeps the error") {
  const auto dir = fresh_dir("abort");
  const auto r = run(config("thm17", {{"epsilon", "0.5"}, {"radial_polys", "1"}}, dir));
  CHECK(r.error.has_value());
  CHECK(r.exit_code() == kExitCriterion);
  REQUIRE(r.criteria.size() == 2);
  CHECK_FALSE(r.criteria[0].pass);
  CHECK_FALSE(r.criteria[1].pass);
  CHECK(fs::exists(dir / "FAILED"));
  const auto back = RunReport::from_json(nlohmann::json::parse(slurp(dir / "report.json")));
  CHECK(back.error == r.error);
}

TEST_CASE("summary of one passing report") {
  const auto s = emit_summary({{"dir", report("half-lattice", {verdict("AC4", true)}, {"domain.csv"})}});
  CHECK(s.exit_code == kExitPass);
  std::istringstream lines(s.table);
  std::string header, row, extra;
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK_FALSE(std::getline(lines, extra));
  CHECK(header.rfind("experiment", 0) == 0);
  CHECK(row.find("PASS") != std::string::npos);
  CHECK(row.find("AC4:PASS") != std::string::npos);
  CHECK(s.json.at("runs").size() == 1);
}

TEST_CASE("summary exit code is the worst case") {
  const auto pass = report("half-lattice", {verdict("AC4", true)}, {"a.csv"});
  const auto fail = report("picard-exp", {verdict("AC5", false)}, {"a.csv"});
  CHECK(emit_summary({{"a", pass}, {"b", fail}}).exit_code == kExitCriterion);
  CHECK(emit_summary({{"a", pass}, {"b", fail}, {"c", RunReport{}}}).exit_code == kExitUsage);
  CHECK(emit_summary({{"a", pass}, {"b", pass}}).exit_code == kExitPass);
  // Ordering does not depend on input order.
  CHECK(emit_summary({{"a", pass}, {"b", fail}}).table == emit_summary({{"b", fail}, {"a", pass}}).table);
}

TEST_CASE("summary flags a report without artifacts") {
  const auto s = emit_summary({{"dir", report("thm17", {verdict("AC3", true), verdict("AC6", true)}, {})}});
  CHECK(s.table.find("flagged") != std::string::npos);
  CHECK(s.json.at("runs")[0].at("no_artifacts") == true);
}

TEST_CASE("summary over directories") {
  const auto good = fresh_dir("sum_good"), missing = fresh_dir("sum_missing");
  run(config("half-lattice", {{"k_max", "10"}, {"l_max", "5"}}, good));
  CHECK(emit_summary(std::vector<fs::path>{good}).exit_code == kExitPass);
  CHECK(emit_summary(std::vector<fs::path>{good, missing}).exit_code == kExitUsage);
}

TEST_CASE("rational enumeration of the unit square") {
  const auto pts = rational_unit_square(200);
  CHECK(pts.size() == 200);
  CHECK(pts[0] == Complex(0.0, 1.0));
  CHECK(pts[1] == Complex(1.0, 0.0));
  CHECK(pts[2] == Complex(1.0, 1.0));
  CHECK(pts[3] == Complex(0.0, 0.5));
  std::set<std::pair<double, double>> seen;
  for (auto z : pts) {
    CHECK(z.real() >= 0.0);
    CHECK(z.real() <= 1.0);
    CHECK(z.imag() >= 0.0);
    CHECK(z.imag() <= 1.0);
    seen.emplace(z.real(), z.imag());
  }
  CHECK(seen.size() == 200);
}

TEST_CASE("command line exit codes") {
  const std::string tool = NAGATA_LAB_PATH;
  const auto dir = fresh_dir("cli");
  fs::create_directories(dir);
  {
    std::ofstream(dir / "bad.cfg") << "experiment = thm18\n";
    std::ofstream(dir / "good.cfg") << "experiment = half-lattice\nk_max = 10\nl_max = 5\n";
    std::ofstream(dir / "fail.cfg") << "experiment = covering-exponent\nk0_sweep = 8\ns_hat_min = 1.99\n";
  }
  CHECK(shell(tool + " run --config " + (dir / "bad.cfg").string() + " --out " + (dir / "bad").string()) == 1);
  CHECK_FALSE(fs::exists(dir / "bad"));
  CHECK(shell(tool + " run --config " + (dir / "good.cfg").string() + " --out " + (dir / "good").string()) == 0);
  CHECK(shell(tool + " run --config " + (dir / "fail.cfg").string() + " --out " + (dir / "fail").string() +
              " --seed 3") == 2);
  CHECK(RunReport::from_json(nlohmann::json::parse(slurp(dir / "fail" / "report.json"))).seed == 3);
  CHECK(shell(tool + " summarize " + (dir / "good").string()) == 0);
  CHECK(shell(tool + " summarize " + (dir / "good").string() + " " + (dir / "fail").string() + " --json " +
              (dir / "summary.json").string()) == 2);
  CHECK(nlohmann::json::parse(slurp(dir / "summary.json")).at("exit_code") == 2);
  CHECK(shell(tool + " frobnicate") == 1);
}
