#include <specord/io.hpp>

#include <cstdio>
#include <fstream>

namespace specord {

namespace {

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back({m(r, c).real(), m(r, c).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& j, int expected_dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != expected_dim) {
    fail("element blocks: block row count does not match signature");
  }
  Matrix m(expected_dim, expected_dim);
  for (int r = 0; r < expected_dim; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (!row.is_array() || static_cast<int>(row.size()) != expected_dim) {
      fail("element blocks: block column count does not match signature");
    }
    for (int c = 0; c < expected_dim; ++c) {
      const auto& entry = row.at(static_cast<std::size_t>(c));
      if (!entry.is_array() || entry.size() != 2) {
        fail("element blocks: entries must be [re, im] pairs");
      }
      m(r, c) = Complex(entry.at(0).get<double>(), entry.at(1).get<double>());
    }
  }
  return m;
}

Signature signature_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) fail("algebra signature: must be a non-empty array");
  Signature signature;
  for (const auto& v : j) {
    if (!v.is_number_integer()) fail("algebra signature: dimensions must be integers");
    signature.push_back(v.get<int>());
  }
  return signature;
}

}  // namespace

nlohmann::json element_to_json(const Element& x) {
  nlohmann::json blocks = nlohmann::json::array();
  for (int k = 0; k < x.block_count(); ++k) blocks.push_back(matrix_to_json(x.block(k)));
  return {{"signature", x.algebra().signature()}, {"blocks", std::move(blocks)}};
}

Element element_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("signature") || !j.contains("blocks")) {
    fail("element: document needs 'signature' and 'blocks'");
  }
  const Algebra algebra(signature_from_json(j.at("signature")));
  const auto& blocks_json = j.at("blocks");
  if (!blocks_json.is_array() ||
      static_cast<int>(blocks_json.size()) != algebra.block_count()) {
    fail("element blocks: block count does not match signature");
  }
  std::vector<Matrix> blocks;
  for (int k = 0; k < algebra.block_count(); ++k) {
    blocks.push_back(matrix_from_json(blocks_json.at(static_cast<std::size_t>(k)),
                                      algebra.block_dim(k)));
  }
  return Element(algebra, std::move(blocks));
}

nlohmann::json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("io: cannot open '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail("io: malformed JSON in '" + path.string() + "': " + e.what());
  }
  return j;
}

void save_json_file(const nlohmann::json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail("io: cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

Element load_element(const std::filesystem::path& path) {
  return element_from_json(load_json_file(path));
}

void save_element(const Element& x, const std::filesystem::path& path) {
  save_json_file(element_to_json(x), path);
}

Element load_projection(const std::filesystem::path& path, const ToleranceProfile& tol) {
  Element p = load_element(path);
  expect_projection(p, tol);
  return p;
}

nlohmann::json family_to_json(const SpectralFamily& f) {
  nlohmann::json breakpoints = nlohmann::json::array();
  for (const Breakpoint& bp : f.breakpoints()) {
    breakpoints.push_back(
        {{"lambda", bp.lambda}, {"projection", element_to_json(bp.projection)}});
  }
  return {{"breakpoints", std::move(breakpoints)}};
}

SpectralFamily family_from_json(const nlohmann::json& j, const ToleranceProfile& tol) {
  if (!j.is_object() || !j.contains("breakpoints")) {
    fail("spectral family: document needs 'breakpoints'");
  }
  std::vector<Breakpoint> breakpoints;
  for (const auto& bj : j.at("breakpoints")) {
    breakpoints.push_back(
        {bj.at("lambda").get<double>(), element_from_json(bj.at("projection"))});
  }
  if (breakpoints.empty()) fail("spectral family: no breakpoints");
  const Algebra algebra = breakpoints.front().projection.algebra();
  return SpectralFamily(algebra, std::move(breakpoints), tol);
}

nlohmann::json bijection_to_json(const MonotoneBijection& f) {
  nlohmann::json knots = nlohmann::json::array();
  for (const auto& [x, y] : f.knots()) knots.push_back({x, y});
  return {{"domain", to_string(f.domain())}, {"knots", std::move(knots)}};
}

MonotoneBijection bijection_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("domain") || !j.contains("knots")) {
    fail("bijection: document needs 'domain' and 'knots'");
  }
  const DomainTag domain = domain_tag_from_string(j.at("domain").get<std::string>());
  std::vector<MonotoneBijection::Knot> knots;
  for (const auto& kj : j.at("knots")) {
    if (!kj.is_array() || kj.size() != 2) fail("bijection: knots must be [x, y] pairs");
    knots.push_back({kj.at(0).get<double>(), kj.at(1).get<double>()});
  }
  return MonotoneBijection(domain, std::move(knots));
}

nlohmann::json jordan_to_json(const JordanSpec& j) {
  nlohmann::json unitaries = nlohmann::json::array();
  for (const Matrix& u : j.unitaries()) unitaries.push_back(matrix_to_json(u));
  nlohmann::json flags = nlohmann::json::array();
  for (bool t : j.transposed()) flags.push_back(t);
  return {{"perm", j.perm()}, {"unitaries", std::move(unitaries)},
          {"transpose", std::move(flags)}};
}

JordanSpec jordan_from_json(const nlohmann::json& j, const ToleranceProfile& tol) {
  if (!j.is_object() || !j.contains("perm") || !j.contains("unitaries") ||
      !j.contains("transpose")) {
    fail("jordan: document needs 'perm', 'unitaries' and 'transpose'");
  }
  std::vector<int> perm = j.at("perm").get<std::vector<int>>();
  Signature source_signature;
  std::vector<Matrix> unitaries;
  for (const auto& uj : j.at("unitaries")) {
    if (!uj.is_array() || uj.empty()) fail("jordan: unitary blocks must be matrices");
    const int n = static_cast<int>(uj.size());
    source_signature.push_back(n);
    unitaries.push_back(matrix_from_json(uj, n));
  }
  std::vector<bool> flags = j.at("transpose").get<std::vector<bool>>();
  return JordanSpec(Algebra(source_signature), std::move(perm), std::move(unitaries),
                    std::move(flags), tol);
}

nlohmann::json pipeline_to_json(const IsoPipeline& p) {
  nlohmann::json steps = nlohmann::json::array();
  for (const IsoPipeline::Step& step : p.steps()) {
    if (const auto* calc = std::get_if<MonotoneBijection>(&step)) {
      steps.push_back({{"calc", bijection_to_json(*calc)}});
    } else {
      steps.push_back({{"theta", jordan_to_json(std::get<JordanSpec>(step))}});
    }
  }
  return {{"source_signature", p.source().signature()},
          {"target_signature", p.target().signature()},
          {"domain", to_string(p.domain())},
          {"steps", std::move(steps)}};
}

IsoPipeline pipeline_from_json(const nlohmann::json& j, const ToleranceProfile& tol) {
  if (!j.is_object() || !j.contains("source_signature") || !j.contains("steps")) {
    fail("pipeline: document needs 'source_signature' and 'steps'");
  }
  const Algebra source(signature_from_json(j.at("source_signature")));
  std::vector<IsoPipeline::Step> steps;
  for (const auto& sj : j.at("steps")) {
    if (sj.contains("calc")) {
      steps.emplace_back(bijection_from_json(sj.at("calc")));
    } else if (sj.contains("theta")) {
      steps.emplace_back(jordan_from_json(sj.at("theta"), tol));
    } else {
      fail("pipeline: steps must be 'calc' or 'theta'");
    }
  }
  std::optional<DomainTag> domain;
  if (j.contains("domain")) {
    domain = domain_tag_from_string(j.at("domain").get<std::string>());
  }
  IsoPipeline pipeline(source, std::move(steps), domain, tol);
  if (j.contains("target_signature")) {
    const Algebra declared(signature_from_json(j.at("target_signature")));
    if (!(declared == pipeline.target())) {
      fail("pipeline: declared target signature does not match the steps");
    }
  }
  return pipeline;
}

IsoPipeline load_pipeline(const std::filesystem::path& path, const ToleranceProfile& tol) {
  return pipeline_from_json(load_json_file(path), tol);
}

std::string format_double(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

}  // namespace specord
