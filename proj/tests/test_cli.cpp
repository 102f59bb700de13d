// Copyright 2026 The selcov Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

#include "selcov/error.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

fs::path fresh_dir(const std::string& tag) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() /
                       ("selcov_cli_" + tag + "_" + std::to_string(::getpid()) + "_" +
                        std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

CliResult run_cli(const std::string& args, const fs::path& work_dir) {
  const fs::path log = work_dir / "cli_output.log";
  const std::string command =
      std::string("'") + SELCOV_CLI_PATH + "' " + args + " >'" + log.string() + "' 2>&1";
  const int status = std::system(command.c_str());
  CliResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  result.output = buffer.str();
  return result;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

const char* kCalibrationSpec = R"({
  "kind": "calibration",
  "calibration_kind": "perfectly_calibrated",
  "confidence_lo": 0.5, "confidence_hi": 1.0,
  "class_count": 2, "record_count": 4000, "seed": 17
})";

const char* kPhenoSpec = R"({
  "kind": "phenology",
  "year_lo": 1900, "year_hi": 2000,
  "label_noise_rate": 0.1, "nonevent_fraction": 0.5, "seed": 23,
  "species": [
    {"name": "native one", "mean_doy": 140, "doy_noise_std": 8, "samples": 300, "group": "native"},
    {"name": "native two", "mean_doy": 145, "doy_noise_std": 8, "samples": 300, "group": "native"},
    {"name": "invasive one", "mean_doy": 160, "doy_noise_std": 8, "samples": 300, "group": "invasive"},
    {"name": "invasive two", "mean_doy": 165, "doy_noise_std": 8, "samples": 300, "group": "invasive"}
  ]
})";

}  // namespace

TEST_CASE("cli: usage errors exit with 1") {
  const auto dir = fresh_dir("usage");
  CHECK(run_cli("definitely-not-a-command", dir).exit_code == 1);
  CHECK(run_cli("curve --no-such-flag x", dir).exit_code == 1);
  CHECK(run_cli("select --curve missing.csv", dir).exit_code == 1);  // objective missing
  CHECK(run_cli("", dir).exit_code == 1);  // subcommand required
  const auto help = run_cli("--help", dir);
  CHECK(help.exit_code == 0);
  CHECK(help.output.find("curve") != std::string::npos);
}

TEST_CASE("cli: data errors exit with 2") {
  const auto dir = fresh_dir("dataerr");
  CHECK(run_cli("curve --in " + (dir / "absent.jsonl").string() + " --out " + dir.string(),
                dir).exit_code == 2);
  write(dir / "empty.jsonl", "");
  CHECK(run_cli("curve --in " + (dir / "empty.jsonl").string() + " --out " + dir.string(),
                dir).exit_code == 2);
  write(dir / "unlabeled.jsonl", "{\"id\":\"a\",\"probs\":[0.4,0.6]}\n");
  CHECK(run_cli("curve --in " + (dir / "unlabeled.jsonl").string() + " --out " + dir.string(),
                dir).exit_code == 2);
}

TEST_CASE("cli: calibration flow curve -> select -> annotate") {
  const auto dir = fresh_dir("flow");
  write(dir / "spec.json", kCalibrationSpec);

  const auto synth = run_cli(
      "synth --spec " + (dir / "spec.json").string() + " --out " + (dir / "data").string(), dir);
  REQUIRE(synth.exit_code == 0);
  CHECK(synth.output.find("reproduce: selcov synth") != std::string::npos);
  REQUIRE(fs::exists(dir / "data" / "predictions.jsonl"));

  const auto curve = run_cli("curve --in " + (dir / "data" / "predictions.jsonl").string() +
                                 " --grid 0.5:1.0:0.01 --out " + (dir / "curves").string(),
                             dir);
  REQUIRE(curve.exit_code == 0);
  REQUIRE(fs::exists(dir / "curves" / "curve.csv"));
  REQUIRE(fs::exists(dir / "curves" / "curve.svg"));

  const auto select = run_cli("select --curve " + (dir / "curves" / "curve.csv").string() +
                                  " --target-accuracy 0.9 --out " +
                                  (dir / "policy.json").string(),
                              dir);
  REQUIRE(select.exit_code == 0);
  const std::string policy = slurp(dir / "policy.json");
  CHECK(policy.find("\"threshold\"") != std::string::npos);
  CHECK(policy.find("\"config\"") != std::string::npos);  // reports embed their config

  const auto annotate = run_cli("annotate --in " + (dir / "data" / "predictions.jsonl").string() +
                                    " --policy " + (dir / "policy.json").string() + " --out " +
                                    (dir / "annotations.jsonl").string(),
                                dir);
  REQUIRE(annotate.exit_code == 0);
  const std::string annotations = slurp(dir / "annotations.jsonl");
  CHECK(annotations.find("\"status\":\"accepted\"") != std::string::npos);
  CHECK(annotations.find("\"status\":\"rejected\"") != std::string::npos);

  // A fixed-threshold run accepts everything at 0 and nothing at 1.
  const auto all = run_cli("annotate --in " + (dir / "data" / "predictions.jsonl").string() +
                               " --threshold 0 --out " + (dir / "all.jsonl").string(),
                           dir);
  REQUIRE(all.exit_code == 0);
  CHECK(slurp(dir / "all.jsonl").find("\"rejected\"") == std::string::npos);
}

TEST_CASE("cli: phenology flow synth -> shift -> subsets -> replicate") {
  const auto dir = fresh_dir("pheno");
  write(dir / "spec.json", kPhenoSpec);

  REQUIRE(run_cli("synth --spec " + (dir / "spec.json").string() + " --out " +
                      (dir / "data").string(),
                  dir).exit_code == 0);
  REQUIRE(fs::exists(dir / "data" / "records.jsonl"));
  REQUIRE(fs::exists(dir / "data" / "truth.csv"));
  REQUIRE(fs::exists(dir / "data" / "reference.csv"));

  const auto shift = run_cli("shift --in " + (dir / "data" / "records.jsonl").string() +
                                 " --threshold 0.5 --min-samples 40 --min-pre 15 --min-post 15 " +
                                 "--out " + (dir / "shift").string(),
                             dir);
  REQUIRE(shift.exit_code == 0);
  REQUIRE(fs::exists(dir / "shift" / "shift.csv"));
  REQUIRE(fs::exists(dir / "shift" / "doy_stats.csv"));
  REQUIRE(fs::exists(dir / "shift" / "aggregate.json"));
  CHECK(slurp(dir / "shift" / "aggregate.json").find("mean_shift_days_per_year") !=
        std::string::npos);

  write(dir / "traits.csv",
        "species,nativity,growth_form,wetland\n"
        "native one,native,forb_herb,FAC\n"
        "native two,native,forb_herb,OBL\n"
        "invasive one,introduced,vine,FAC\n"
        "invasive two,introduced,vine,OBL\n");
  const auto subsets = run_cli("subsets --shift " + (dir / "shift" / "shift.csv").string() +
                                   " --traits " + (dir / "traits.csv").string() + " --doy-stats " +
                                   (dir / "shift" / "doy_stats.csv").string() +
                                   " --characteristic nativity --out " +
                                   (dir / "subsets.json").string(),
                               dir);
  REQUIRE(subsets.exit_code == 0);
  const std::string subsets_json = slurp(dir / "subsets.json");
  CHECK(subsets_json.find("\"characteristic\": \"nativity\"") != std::string::npos);

  const auto replicate = run_cli("replicate --in " + (dir / "data" / "records.jsonl").string() +
                                     " --threshold 0.9 --reference " +
                                     (dir / "data" / "reference.csv").string() + " --out " +
                                     (dir / "replication.json").string(),
                                 dir);
  REQUIRE(replicate.exit_code == 0);
  const std::string replication = slurp(dir / "replication.json");
  CHECK(replication.find("mean_abs_doy_error") != std::string::npos);
  CHECK(replication.find("group_difference_days") != std::string::npos);
}

TEST_CASE("cli: shift with default filters marks a 74-sample species filtered") {
  const auto dir = fresh_dir("filter74");
  write(dir / "spec.json", R"({
    "kind": "phenology", "year_lo": 1900, "year_hi": 2000, "seed": 99,
    "species": [{"name": "sparse", "mean_doy": 150, "doy_noise_std": 5, "samples": 74}]
  })");
  REQUIRE(run_cli("synth --spec " + (dir / "spec.json").string() + " --out " +
                      (dir / "data").string(),
                  dir).exit_code == 0);
  const auto shift = run_cli("shift --in " + (dir / "data" / "records.jsonl").string() +
                                 " --min-samples 75 --era 1950 --out " + (dir / "out").string(),
                             dir);
  REQUIRE(shift.exit_code == 0);
  const std::string aggregate = slurp(dir / "out" / "aggregate.json");
  CHECK(aggregate.find("\"n_filtered\": 1") != std::string::npos);
  CHECK(aggregate.find("\"n_analyzed\": 0") != std::string::npos);
}

TEST_CASE("cli: shift --table aggregates an external species-level table") {
  const auto dir = fresh_dir("table");
  write(dir / "table.csv",
        "species,slope_dpy,slope_dpd,p,n,n_pre,n_post,class\n"
        "a,-0.05,-0.5,0.001,100,50,50,earlier\n"
        "b,0.03,0.3,0.02,100,50,50,later\n"
        "c,0.001,0.01,0.9,100,50,50,none\n");
  const auto result = run_cli("shift --table " + (dir / "table.csv").string() + " --out " +
                                  (dir / "agg").string(),
                              dir);
  REQUIRE(result.exit_code == 0);
  const std::string aggregate = slurp(dir / "agg" / "aggregate.json");
  CHECK(aggregate.find("\"n_analyzed\": 3") != std::string::npos);
  CHECK(aggregate.find("\"n_earlier\": 1") != std::string::npos);
  CHECK(aggregate.find("\"n_later\": 1") != std::string::npos);

  // Column remapping with days/decade units.
  write(dir / "alt.csv",
        "taxon,trend_dpd,pval\n"
        "a,-0.5,0.001\n"
        "b,0.3,0.02\n");
  const auto remapped = run_cli("shift --table " + (dir / "alt.csv").string() +
                                    " --col-species taxon --col-slope trend_dpd --col-p pval " +
                                    "--slope-unit dpd --out " + (dir / "agg2").string(),
                                dir);
  REQUIRE(remapped.exit_code == 0);
  CHECK(slurp(dir / "agg2" / "aggregate.json").find("\"n_significant\": 2") != std::string::npos);
}

TEST_CASE("cli: identical runs produce byte-identical outputs") {
  const auto dir = fresh_dir("determinism");
  write(dir / "spec.json", kCalibrationSpec);
  for (const char* tag : {"one", "two"}) {
    const fs::path out = dir / tag;
    REQUIRE(run_cli("synth --spec " + (dir / "spec.json").string() + " --out " +
                        (out / "data").string(),
                    dir).exit_code == 0);
    REQUIRE(run_cli("curve --in " + (out / "data" / "predictions.jsonl").string() +
                        " --grid 0.5:1.0:0.01 --out " + (out / "curves").string(),
                    dir).exit_code == 0);
  }
  CHECK(slurp(dir / "one" / "data" / "predictions.jsonl") ==
        slurp(dir / "two" / "data" / "predictions.jsonl"));
  CHECK(slurp(dir / "one" / "curves" / "curve.csv") == slurp(dir / "two" / "curves" / "curve.csv"));
  CHECK(slurp(dir / "one" / "curves" / "curve.svg") == slurp(dir / "two" / "curves" / "curve.svg"));
}

TEST_CASE("cli: SELCOV_OUT_DIR supplies the default output directory") {
  const auto dir = fresh_dir("envout");
  write(dir / "spec.json", kCalibrationSpec);
  const fs::path out = dir / "env_out";
  const std::string command = "SELCOV_OUT_DIR='" + out.string() + "' '" + SELCOV_CLI_PATH +
                              "' synth --spec '" + (dir / "spec.json").string() + "' >'" +
                              (dir / "log.txt").string() + "' 2>&1";
  const int status = std::system(command.c_str());
  REQUIRE(WIFEXITED(status));
  REQUIRE(WEXITSTATUS(status) == 0);
  CHECK(fs::exists(out / "predictions.jsonl"));
}
