#include <doctest.h>

#include <cmath>
#include <vector>

#include <specord/lattice.hpp>
#include <specord/rng.hpp>

using namespace specord;

namespace {

const Algebra m2({2});

Element diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return Element(m2, {m});
}

Element halfsum() {  // projector onto (1,1)/sqrt(2)
  Matrix m(2, 2);
  m << 0.5, 0.5, 0.5, 0.5;
  return Element(m2, {m});
}

}  // namespace

TEST_CASE("projection order") {
  Rng rng(21);
  const Algebra a({3});
  const Element p = random_projection(a, rng);
  CHECK(proj_leq(Element::zero(a), p));
  CHECK(proj_leq(p, identity(a)));
  CHECK(proj_leq(p, p));
  CHECK_FALSE(proj_leq(diag2(1.0, 0.0), halfsum()));
  CHECK_THROWS_AS(proj_leq(diag2(0.5, 0.0), diag2(1.0, 0.0)), std::invalid_argument);
}

TEST_CASE("meet and join of transversal lines") {
  const Element p = diag2(1.0, 0.0);
  const Element q = halfsum();
  CHECK(meet(p, q).operator_norm() < 1e-9);
  CHECK((join(p, q) - identity(m2)).operator_norm() < 1e-9);
}

TEST_CASE("lattice idempotence and complementation") {
  Rng rng(22);
  const Algebra a({2, 2});
  for (int i = 0; i < 20; ++i) {
    const Element p = random_projection(a, rng);
    CHECK((meet(p, p) - p).operator_norm() < 1e-9);
    CHECK((join(p, p) - p).operator_norm() < 1e-9);
    const Element c = complement(p);
    CHECK(meet(p, c).operator_norm() < 1e-9);
    CHECK((join(p, c) - identity(a)).operator_norm() < 1e-9);
    CHECK((complement(c) - p).operator_norm() < 1e-12);
  }
  CHECK((complement(diag2(1.0, 0.0)) - diag2(0.0, 1.0)).operator_norm() < 1e-12);
  CHECK(complement(identity(a)).operator_norm() < 1e-12);
}

TEST_CASE("meet and join are the lattice bounds") {
  Rng rng(23);
  const Algebra a({3});
  for (int i = 0; i < 30; ++i) {
    const Element p = random_projection(a, rng);
    const Element q = random_projection(a, rng);
    const Element r = random_projection(a, rng);
    const Element lower = meet(p, q);
    const Element upper = join(p, q);
    CHECK(proj_leq(lower, p));
    CHECK(proj_leq(lower, q));
    CHECK(proj_leq(p, upper));
    CHECK(proj_leq(q, upper));
    if (proj_leq(r, p) && proj_leq(r, q)) CHECK(proj_leq(r, lower));
    if (proj_leq(p, r) && proj_leq(q, r)) CHECK(proj_leq(upper, r));

    // De Morgan
    CHECK((complement(meet(p, q)) - join(complement(p), complement(q)))
              .operator_norm() < 1e-9);
  }
}

TEST_CASE("abelian lattices are distributive") {
  Rng rng(24);
  const Algebra a({1, 1, 1, 1});
  for (int i = 0; i < 40; ++i) {
    const Element p = random_central_projection(a, rng);
    const Element q = random_central_projection(a, rng);
    const Element r = random_central_projection(a, rng);
    const Element lhs = meet(p, join(q, r));
    const Element rhs = join(meet(p, q), meet(p, r));
    CHECK((lhs - rhs).operator_norm() < 1e-12);
  }
}

TEST_CASE("atomicity is total rank one") {
  Rng rng(25);
  const Algebra a({3});
  const Element h = random_hermitian(a, rng);
  CHECK(is_atomic(eig(h).front().projector));
  CHECK_FALSE(is_atomic(identity(m2)));

  // rank one in each of two blocks is not atomic
  const Algebra b({2, 2});
  std::vector<Matrix> blocks;
  Matrix p1 = Matrix::Zero(2, 2);
  p1(0, 0) = 1.0;
  blocks.push_back(p1);
  blocks.push_back(p1);
  CHECK_FALSE(is_atomic(Element(b, blocks)));
  CHECK(projection_rank(Element(b, blocks)) == 2);
}

TEST_CASE("centrality") {
  const Algebra a({1, 2});
  CHECK(is_central(3.0 * identity(a)));
  CHECK_FALSE(is_central(diag2(1.0, 2.0)));
  Matrix scalar3 = 2.0 * Matrix::Identity(2, 2);
  Matrix scalar1 = 3.0 * Matrix::Identity(1, 1);
  CHECK(is_central(Element(a, {scalar1, scalar3})));
}

TEST_CASE("central projection witness") {
  SUBCASE("central projections have none") {
    Rng rng(26);
    const Algebra a({2, 3});
    CHECK_FALSE(central_proj_witness(random_central_projection(a, rng)).has_value());
    CHECK_FALSE(central_proj_witness(identity(a)).has_value());
  }

  SUBCASE("worked two-by-two witness") {
    const Element z = diag2(1.0, 0.0);
    const auto witness = central_proj_witness(z);
    REQUIRE(witness.has_value());
    CHECK((*witness - halfsum()).operator_norm() < 1e-9);
    CHECK(meet(z, *witness).operator_norm() < 1e-9);
    const Element recombined = join(meet(z, *witness), meet(z, complement(*witness)));
    CHECK(recombined.operator_norm() < 1e-9);  // both meets vanish
    CHECK((z - recombined).operator_norm() > 0.5);
  }

  SUBCASE("distributivity characterizes centrality") {
    Rng rng(27);
    const Algebra a({2, 3});
    const Element z = random_central_projection(a, rng);
    for (int i = 0; i < 50; ++i) {
      const Element p = random_projection(a, rng);
      const Element q = random_projection(a, rng);
      const Element lhs = meet(z, join(p, q));
      const Element rhs = join(meet(z, p), meet(z, q));
      CHECK((lhs - rhs).operator_norm() < 1e-9);
    }
    for (int i = 0; i < 10; ++i) {
      const Element p = random_projection(a, rng);
      if (is_central(p)) continue;
      const auto witness = central_proj_witness(p);
      REQUIRE(witness.has_value());
      const Element recombined =
          join(meet(p, *witness), meet(p, complement(*witness)));
      CHECK((p - recombined).operator_norm() >= 0.5);
    }
  }
}
