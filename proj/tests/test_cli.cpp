#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <specord/io.hpp>
#include <specord/rng.hpp>

using namespace specord;

namespace {

struct CommandResult {
  int status = -1;
  std::string output;
};

CommandResult run_cli(const std::string& args) {
  const std::string command = std::string(SPECORD_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CommandResult result;
  std::array<char, 512> buffer{};
  while (fgets(buffer.data(), buffer.size(), pipe)) result.output += buffer.data();
  const int raw = pclose(pipe);
  result.status = WEXITSTATUS(raw);
  return result;
}

std::filesystem::path data_file(const std::string& name) {
  return std::filesystem::path(SPECORD_TEST_DATA_DIR) / name;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("specord_cli_" + name);
}

}  // namespace

TEST_CASE("compare reports equality with both verdicts") {
  const auto file = data_file("half_p.json").string();
  const auto result = run_cli("compare " + file + " " + file);
  CHECK(result.status == 0);
  CHECK(result.output.find("spectral: equal") != std::string::npos);
  CHECK(result.output.find("loewner: equal") != std::string::npos);
}

TEST_CASE("compare honours --expect") {
  const auto a = data_file("half_p.json").string();
  const auto b = data_file("q_diagonal.json").string();
  const auto mismatch = run_cli("compare " + a + " " + b + " --expect equal");
  CHECK(mismatch.status == 1);
}

TEST_CASE("sup reproduces the golden worked instance") {
  const auto out = temp_file("sup.json");
  const auto result = run_cli("sup " + data_file("half_p.json").string() + " " +
                              data_file("q_plus.json").string() + " -o " +
                              out.string());
  REQUIRE(result.status == 0);
  const Element computed = load_element(out);
  const Element golden = load_element(data_file("sup_golden.json"));
  CHECK((computed - golden).operator_norm() <= 1e-8);
  std::filesystem::remove(out);
}

TEST_CASE("specfam emits a parseable family") {
  const auto out = temp_file("family.json");
  const auto result =
      run_cli("specfam " + data_file("q_diagonal.json").string() + " -o " + out.string());
  REQUIRE(result.status == 0);
  const SpectralFamily family = family_from_json(load_json_file(out));
  CHECK(family.size() == 2);
  std::filesystem::remove(out);
}

TEST_CASE("apply runs a pipeline file") {
  const auto out = temp_file("applied.json");
  const auto result = run_cli("apply --pipeline " +
                              data_file("transpose_pipeline.json").string() + " " +
                              data_file("complex_h.json").string() + " -o " +
                              out.string());
  REQUIRE(result.status == 0);
  const Element applied = load_element(out);
  const Element original = load_element(data_file("complex_h.json"));
  CHECK((applied - original).operator_norm() > 0.5);  // genuinely moved
  CHECK((applied - original.transposed()).operator_norm() <= 1e-10);
  std::filesystem::remove(out);
}

TEST_CASE("decompose emits the canonical data") {
  const auto result = run_cli("decompose --pipeline " +
                              data_file("transpose_pipeline3.json").string() +
                              " --probes 4 --seed 7");
  REQUIRE(result.status == 0);
  const auto j = nlohmann::json::parse(result.output);
  CHECK(j.contains("f_grid"));
  CHECK(j.contains("tau_samples"));
  CHECK(j.at("residual").get<double>() <= 1e-8);
}

TEST_CASE("orthofactor refuses maps that break orthogonality") {
  const auto result = run_cli("orthofactor --pipeline " +
                              data_file("shift_pipeline3.json").string() +
                              " --probes 4 --seed 7");
  CHECK(result.status == 1);
  const auto j = nlohmann::json::parse(result.output);
  CHECK(j.at("refused").get<bool>());
}

TEST_CASE("orthofactor factorizes a transport pipeline") {
  const auto result = run_cli("orthofactor --pipeline " +
                              data_file("transpose_pipeline3.json").string() +
                              " --probes 8 --seed 7");
  REQUIRE(result.status == 0);
  const auto j = nlohmann::json::parse(result.output);
  CHECK_FALSE(j.at("refused").get<bool>());
  CHECK(j.at("residual").get<double>() <= 1e-8);
}

TEST_CASE("verify runs a single check and writes reports") {
  const auto report_path = temp_file("report.json");
  const auto result = run_cli("verify --check sup_scaled --dims '2;3' --trials 10 "
                              "--seed 42 --json " +
                              report_path.string());
  REQUIRE(result.status == 0);
  CHECK(result.output.find("sup_scaled") != std::string::npos);
  CHECK(result.output.find("pass") != std::string::npos);
  const auto reports = load_json_file(report_path);
  REQUIRE(reports.is_array());
  CHECK(reports.at(0).at("failures").get<int>() == 0);
  std::filesystem::remove(report_path);
}

TEST_CASE("the seed environment variable backs the flag") {
  const auto with_env = [](const std::string& args, const std::string& seed) {
    const std::string command = "SPECORD_SEED=" + seed + " " +
                                std::string(SPECORD_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string output;
    std::array<char, 512> buffer{};
    while (fgets(buffer.data(), buffer.size(), pipe)) output += buffer.data();
    pclose(pipe);
    return output;
  };
  const auto report_a = temp_file("env_a.json");
  const auto report_b = temp_file("env_b.json");
  with_env("verify --check rescale_translate --dims 2 --trials 5 --json " +
               report_a.string(),
           "123");
  run_cli("verify --check rescale_translate --dims 2 --trials 5 --seed 123 --json " +
          report_b.string());
  auto ja = load_json_file(report_a);
  auto jb = load_json_file(report_b);
  ja.at(0)["wall_time_seconds"] = 0.0;
  jb.at(0)["wall_time_seconds"] = 0.0;
  CHECK(ja.dump() == jb.dump());
  std::filesystem::remove(report_a);
  std::filesystem::remove(report_b);
}

TEST_CASE("malformed input exits with the input-error code") {
  const auto path = temp_file("broken.json");
  std::ofstream(path) << "{broken";
  const auto result = run_cli("compare " + path.string() + " " + path.string());
  CHECK(result.status == 2);
  std::filesystem::remove(path);

  const auto missing = run_cli("compare /nonexistent/a.json /nonexistent/b.json");
  CHECK(missing.status == 2);
}
