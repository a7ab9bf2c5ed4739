#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include <specord/morphisms.hpp>

namespace specord {

// Element document: {"signature":[n1,...],"blocks":[[[[re,im],...],...],...]}
// with row-major blocks and IEEE-754 doubles in decimal.
nlohmann::json element_to_json(const Element& x);
Element element_from_json(const nlohmann::json& j);
Element load_element(const std::filesystem::path& path);
void save_element(const Element& x, const std::filesystem::path& path);
// Validates the projection invariants on load.
Element load_projection(const std::filesystem::path& path,
                        const ToleranceProfile& tol = default_tolerances());

// Family document: {"breakpoints":[{"lambda":l,"projection":<Element>},...]}
nlohmann::json family_to_json(const SpectralFamily& f);
SpectralFamily family_from_json(const nlohmann::json& j,
                                const ToleranceProfile& tol = default_tolerances());

nlohmann::json bijection_to_json(const MonotoneBijection& f);
MonotoneBijection bijection_from_json(const nlohmann::json& j);

nlohmann::json jordan_to_json(const JordanSpec& j);
JordanSpec jordan_from_json(const nlohmann::json& j,
                            const ToleranceProfile& tol = default_tolerances());

// Pipeline document: {"source_signature":[...],"target_signature":[...],
//   "steps":[{"calc":{"domain":...,"knots":[[x,y],...]}},
//            {"theta":{"perm":[...],"unitaries":[...],"transpose":[...]}}]}
nlohmann::json pipeline_to_json(const IsoPipeline& p);
IsoPipeline pipeline_from_json(const nlohmann::json& j,
                               const ToleranceProfile& tol = default_tolerances());
IsoPipeline load_pipeline(const std::filesystem::path& path,
                          const ToleranceProfile& tol = default_tolerances());

nlohmann::json load_json_file(const std::filesystem::path& path);
void save_json_file(const nlohmann::json& j, const std::filesystem::path& path);

// 17 significant digits; round-trips doubles exactly.
std::string format_double(double v);

}  // namespace specord
