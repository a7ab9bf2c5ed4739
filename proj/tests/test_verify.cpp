#include <doctest.h>

#include <algorithm>

#include <specord/verify.hpp>

using namespace specord;

TEST_CASE("the registry lists every suite") {
  const std::vector<std::string> expected = {
      "basic_properties", "rescale_translate", "corner_families",
      "sup_inf_formulas", "independence",      "sublattices",
      "sup_orthogonal",   "sup_scaled",        "atomic_char",
      "central_distributive", "central_projections", "sup_of_infima",
      "calculus",         "theta_jordan",      "canonical_effects",
      "canonical_positive", "canonical_sa",    "ortho_factor",
      "pos_neg_parts",    "wigner"};
  CHECK(check_names() == expected);
}

TEST_CASE("unknown checks are rejected") {
  CHECK_THROWS_AS(run_check("no_such_check", default_signatures(), 1, 1),
                  std::invalid_argument);
}

TEST_CASE("default signatures cover factors, sums and the abelian case") {
  const auto& dims = default_signatures();
  REQUIRE(dims.size() == 5);
  CHECK(dims[0] == Signature{2});
  CHECK(dims[3] == Signature{2, 3});
  CHECK(dims[4] == Signature{1, 1, 1, 1});
}

TEST_CASE("reports are deterministic for a fixed seed") {
  const std::vector<Signature> dims = {{2}, {3}};
  CheckReport a = run_check("sup_scaled", dims, 10, 42);
  CheckReport b = run_check("sup_scaled", dims, 10, 42);
  a.wall_time_seconds = 0.0;
  b.wall_time_seconds = 0.0;
  CHECK(report_to_json(a).dump() == report_to_json(b).dump());

  CheckReport c = run_check("sup_scaled", dims, 10, 43);
  c.wall_time_seconds = 0.0;
  CHECK(report_to_json(a).dump() != report_to_json(c).dump());
}

TEST_CASE("reports serialize and parse losslessly") {
  const CheckReport report = run_check("rescale_translate", {{2}}, 5, 7);
  const CheckReport back = report_from_json(report_to_json(report));
  CHECK(back.check == report.check);
  CHECK(back.dims == report.dims);
  CHECK(back.seed == report.seed);
  CHECK(back.trials == report.trials);
  CHECK(back.failures == report.failures);
  CHECK(back.worst_deviation == report.worst_deviation);
}

TEST_CASE("worked check runs pass") {
  SUBCASE("scaled projection suprema over two signatures") {
    const CheckReport report = run_check("sup_scaled", {{2}, {3}}, 40, 42);
    CHECK(report.failures == 0);
    CHECK(report.worst_deviation <= 1e-8);
  }

  SUBCASE("central distributivity on a two-block algebra") {
    const CheckReport report = run_check("central_distributive", {{2, 3}}, 10, 7);
    CHECK(report.failures == 0);
    CHECK_FALSE(report.witness.is_null());  // constructive witnesses are recorded
  }

  SUBCASE("scalar algebras make every order coincide") {
    const CheckReport report = run_check("basic_properties", {{1}}, 25, 1);
    CHECK(report.failures == 0);
  }

  SUBCASE("factor filters fall back to their documented defaults") {
    const CheckReport report = run_check("wigner", {{1, 1, 1, 1}}, 3, 5);
    CHECK(report.failures == 0);
    REQUIRE_FALSE(report.dims.empty());
    CHECK(report.dims[0] == Signature{3});
  }
}

TEST_CASE("the full registry runs on tiny budgets") {
  const auto reports = run_all({{2}, {1, 1}}, 2, 11);
  CHECK(reports.size() == check_names().size());
  for (std::size_t i = 0; i < reports.size(); ++i) {
    CAPTURE(reports[i].check);
    CHECK(reports[i].failures == 0);
    CHECK(reports[i].check == check_names()[i]);
  }
}
