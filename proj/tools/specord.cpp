// Command-line front end: element I/O, order queries, lattice operations,
// canonical decomposition and the verification suite.

#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <specord/io.hpp>
#include <specord/verify.hpp>

namespace {

using namespace specord;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInputError = 2;

std::string spectral_verdict(const Element& a, const Element& b) {
  const bool ab = spectral_leq(a, b);
  const bool ba = spectral_leq(b, a);
  if (ab && ba) return "equal";
  if (ab) return "A⪯B";
  if (ba) return "B⪯A";
  return "incomparable";
}

std::string loewner_verdict(const Element& a, const Element& b) {
  const bool ab = loewner_leq(a, b);
  const bool ba = loewner_leq(b, a);
  if (ab && ba) return "equal";
  if (ab) return "A≤B";
  if (ba) return "B≤A";
  return "incomparable";
}

void emit(const nlohmann::json& j, const std::optional<std::string>& out_path) {
  if (out_path) {
    save_json_file(j, *out_path);
  } else {
    std::cout << j.dump(2) << '\n';
  }
}

std::vector<Signature> parse_dims(const std::string& text) {
  std::vector<Signature> dims;
  Signature current;
  int value = -1;
  const auto push_value = [&] {
    if (value >= 0) {
      current.push_back(value);
      value = -1;
    }
  };
  const auto push_signature = [&] {
    push_value();
    if (!current.empty()) {
      dims.push_back(current);
      current.clear();
    }
  };
  for (char c : text) {
    if (c >= '0' && c <= '9') {
      value = (value < 0 ? 0 : value * 10) + (c - '0');
    } else if (c == ',' || c == ' ') {
      push_value();
    } else if (c == ';') {
      push_signature();
    } else {
      fail("dims: expected digits, ',' and ';' (e.g. \"2;3;2,3\")");
    }
  }
  push_signature();
  if (dims.empty()) fail("dims: no signatures given");
  return dims;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("SPECORD_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 42;
}

int run(int argc, char** argv) {
  CLI::App app{"spectral order toolkit for block matrix *-algebras"};
  app.require_subcommand(1);

  // compare
  auto* compare = app.add_subcommand("compare", "compare two elements");
  std::string compare_a, compare_b;
  std::optional<std::string> expect;
  compare->add_option("A", compare_a, "element file")->required();
  compare->add_option("B", compare_b, "element file")->required();
  compare->add_option("--expect", expect,
                      "fail unless the spectral verdict matches "
                      "(equal|A⪯B|B⪯A|incomparable)");

  // sup / inf
  auto* sup = app.add_subcommand("sup", "spectral supremum of elements");
  auto* inf = app.add_subcommand("inf", "spectral infimum of elements");
  std::vector<std::string> sup_files, inf_files;
  std::optional<std::string> sup_out, inf_out;
  sup->add_option("files", sup_files, "element files")->required()->expected(-1);
  sup->add_option("-o,--output", sup_out, "output element file");
  inf->add_option("files", inf_files, "element files")->required()->expected(-1);
  inf->add_option("-o,--output", inf_out, "output element file");

  // specfam
  auto* specfam = app.add_subcommand("specfam", "spectral family of an element");
  std::string specfam_file;
  std::optional<std::string> specfam_out;
  specfam->add_option("A", specfam_file, "element file")->required();
  specfam->add_option("-o,--output", specfam_out, "output family file");

  // apply
  auto* apply = app.add_subcommand("apply", "apply a pipeline to an element");
  std::string apply_pipeline, apply_file;
  std::optional<std::string> apply_out;
  apply->add_option("--pipeline", apply_pipeline, "pipeline file")->required();
  apply->add_option("A", apply_file, "element file")->required();
  apply->add_option("-o,--output", apply_out, "output element file");

  // decompose
  auto* decompose = app.add_subcommand(
      "decompose", "canonical split of an effect-interval isomorphism");
  std::string decompose_pipeline;
  int decompose_probes = 32;
  std::optional<std::uint64_t> decompose_seed;
  std::optional<std::string> decompose_out;
  decompose->add_option("--pipeline", decompose_pipeline, "pipeline file")->required();
  decompose->add_option("--probes", decompose_probes, "probe count");
  decompose->add_option("--seed", decompose_seed, "random seed");
  decompose->add_option("-o,--output", decompose_out, "output report file");

  // orthofactor
  auto* orthofactor = app.add_subcommand(
      "orthofactor", "factor an orthogonality-preserving isomorphism");
  std::string orthofactor_pipeline;
  int orthofactor_probes = 32;
  std::optional<std::uint64_t> orthofactor_seed;
  std::optional<std::string> orthofactor_out;
  orthofactor->add_option("--pipeline", orthofactor_pipeline, "pipeline file")
      ->required();
  orthofactor->add_option("--probes", orthofactor_probes, "probe count");
  orthofactor->add_option("--seed", orthofactor_seed, "random seed");
  orthofactor->add_option("-o,--output", orthofactor_out, "output report file");

  // verify
  auto* verify = app.add_subcommand("verify", "run the verification suite");
  std::string verify_check = "all";
  std::string verify_dims;
  int verify_trials = 100;
  std::optional<std::uint64_t> verify_seed;
  std::optional<std::string> verify_json;
  verify->add_option("--check", verify_check, "check name or 'all'");
  verify->add_option("--dims", verify_dims,
                     "signatures, e.g. \"2;3;4;2,3;1,1,1,1\"");
  verify->add_option("--trials", verify_trials, "trials per check");
  verify->add_option("--seed", verify_seed, "random seed");
  verify->add_option("--json", verify_json, "write the reports as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  if (compare->parsed()) {
    const Element a = load_element(compare_a);
    const Element b = load_element(compare_b);
    const std::string verdict = spectral_verdict(a, b);
    std::cout << "spectral: " << verdict << '\n';
    std::cout << "loewner: " << loewner_verdict(a, b) << '\n';
    if (expect && verdict != *expect) return kExitCheckFailed;
    return kExitOk;
  }

  if (sup->parsed() || inf->parsed()) {
    const auto& files = sup->parsed() ? sup_files : inf_files;
    std::vector<Element> xs;
    for (const std::string& file : files) xs.push_back(load_element(file));
    const Element result = sup->parsed() ? spectral_sup(xs) : spectral_inf(xs);
    emit(element_to_json(result), sup->parsed() ? sup_out : inf_out);
    return kExitOk;
  }

  if (specfam->parsed()) {
    const Element x = load_element(specfam_file);
    emit(family_to_json(family_of(x)), specfam_out);
    return kExitOk;
  }

  if (apply->parsed()) {
    const IsoPipeline pipeline = load_pipeline(apply_pipeline);
    const Element x = load_element(apply_file);
    emit(element_to_json(pipeline.apply(x)), apply_out);
    return kExitOk;
  }

  if (decompose->parsed()) {
    const IsoPipeline pipeline = load_pipeline(decompose_pipeline);
    const auto cd =
        canonical_decompose(pipeline, decompose_probes, resolve_seed(decompose_seed));
    nlohmann::json samples = nlohmann::json::array();
    for (std::size_t i = 0; i < cd.grid.size(); ++i) {
      samples.push_back({cd.grid[i], cd.f_samples[i]});
    }
    nlohmann::json taus = nlohmann::json::array();
    for (const auto& [p, image] : cd.tau_samples) {
      taus.push_back({{"projection", element_to_json(p)},
                      {"image", element_to_json(image)}});
    }
    emit({{"f_grid", std::move(samples)},
          {"tau_samples", std::move(taus)},
          {"worst_scalar_defect", cd.worst_scalar_defect},
          {"worst_projection_defect", cd.worst_projection_defect},
          {"residual", cd.residual}},
         decompose_out);
    return kExitOk;
  }

  if (orthofactor->parsed()) {
    const IsoPipeline pipeline = load_pipeline(orthofactor_pipeline);
    const auto fact = ortho_iso_factorize(pipeline, orthofactor_probes,
                                          resolve_seed(orthofactor_seed));
    if (fact.refused) {
      nlohmann::json refusal = {{"refused", true}, {"reason", fact.refusal_reason}};
      if (fact.ortho_witness) {
        refusal["witness"] = {
            {"first", element_to_json(fact.ortho_witness->first)},
            {"second", element_to_json(fact.ortho_witness->second)}};
      }
      emit(refusal, orthofactor_out);
      return kExitCheckFailed;
    }
    nlohmann::json samples = nlohmann::json::array();
    for (std::size_t i = 0; i < fact.grid.size(); ++i) {
      samples.push_back({fact.grid[i], fact.f_samples[i]});
    }
    emit({{"refused", false},
          {"f_grid", std::move(samples)},
          {"psi", jordan_to_json(*fact.psi)},
          {"residual", fact.residual},
          {"pos_neg_deviation", fact.pos_neg_deviation}},
         orthofactor_out);
    return kExitOk;
  }

  if (verify->parsed()) {
    const std::vector<Signature> dims =
        verify_dims.empty() ? default_signatures() : parse_dims(verify_dims);
    const std::uint64_t seed = resolve_seed(verify_seed);
    std::vector<CheckReport> reports;
    if (verify_check == "all") {
      reports = run_all(dims, verify_trials, seed);
    } else {
      reports.push_back(run_check(verify_check, dims, verify_trials, seed));
    }

    bool all_passed = true;
    std::printf("%-22s %7s %9s %14s %9s\n", "check", "trials", "failures",
                "worst", "time[s]");
    for (const CheckReport& report : reports) {
      all_passed = all_passed && report.passed();
      std::printf("%-22s %7d %9d %14s %9.3f  %s\n", report.check.c_str(),
                  report.trials, report.failures,
                  format_double(report.worst_deviation).c_str(),
                  report.wall_time_seconds, report.passed() ? "pass" : "FAIL");
    }
    if (verify_json) {
      nlohmann::json out = nlohmann::json::array();
      for (const CheckReport& report : reports) out.push_back(report_to_json(report));
      save_json_file(out, *verify_json);
    }
    return all_passed ? kExitOk : kExitCheckFailed;
  }

  return kExitInputError;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}
