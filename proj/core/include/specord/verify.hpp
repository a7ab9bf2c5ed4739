#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <specord/io.hpp>

namespace specord {

struct CheckReport {
  std::string check;
  std::vector<Signature> dims;  // signatures actually exercised
  std::uint64_t seed = 0;
  int trials = 0;
  int failures = 0;
  double worst_deviation = 0.0;
  nlohmann::json witness;  // null unless failing or constructive
  double wall_time_seconds = 0.0;

  bool passed() const noexcept { return failures == 0; }
};

nlohmann::json report_to_json(const CheckReport& report);
CheckReport report_from_json(const nlohmann::json& j);

// Registered check names, in suite order.
const std::vector<std::string>& check_names();

// Signatures used when the caller passes none: one small factor of each size,
// a two-block algebra and an abelian one.
const std::vector<Signature>& default_signatures();

// Runs one named check. Deterministic for fixed (name, dims, trials, seed);
// checks with structural requirements (factors, abelian, proper corners)
// filter the signatures and fall back to their documented defaults when the
// filter comes up empty.
CheckReport run_check(const std::string& name, const std::vector<Signature>& dims,
                      int trials, std::uint64_t seed);

std::vector<CheckReport> run_all(const std::vector<Signature>& dims, int trials,
                                 std::uint64_t seed);

}  // namespace specord
