#include <doctest.h>

#include <cmath>

#include <specord/algebra.hpp>
#include <specord/rng.hpp>

using namespace specord;

namespace {

Element diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return Element(Algebra({2}), {m});
}

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

}  // namespace

TEST_CASE("algebra signature invariants") {
  const Algebra a({2, 3});
  CHECK(a.block_count() == 2);
  CHECK(a.total_dim() == 5);
  CHECK(a.dim() == 13);
  CHECK_FALSE(a.is_factor());
  CHECK_FALSE(a.is_abelian());
  CHECK(Algebra({1, 1}).is_abelian());
  CHECK(Algebra({4}).is_factor());
  CHECK_THROWS_AS(Algebra({}), std::invalid_argument);
  CHECK_THROWS_AS(Algebra({2, 0}), std::invalid_argument);
}

TEST_CASE("identity is the multiplicative unit") {
  const Element one2 = identity(Algebra({2}));
  CHECK((one2 - diag2(1.0, 1.0)).operator_norm() == doctest::Approx(0.0));

  const Algebra a({1, 2});
  const Element one = identity(a);
  CHECK(one.block(0)(0, 0) == Complex(1.0, 0.0));
  CHECK((one.block(1) - Matrix::Identity(2, 2)).norm() == doctest::Approx(0.0));

  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    const Element x = random_hermitian(a, rng);
    CHECK((one * x - x).operator_norm() <= 1e-14 * std::max(1.0, x.operator_norm()));
  }
}

TEST_CASE("eig handles the worked two-by-two cases") {
  const auto diag_pairs = eig(diag2(0.0, 1.0));
  REQUIRE(diag_pairs.size() == 2);
  CHECK(diag_pairs[0].eigenvalue == doctest::Approx(0.0));
  CHECK(diag_pairs[1].eigenvalue == doctest::Approx(1.0));
  CHECK((diag_pairs[0].projector - diag2(1.0, 0.0)).operator_norm() < 1e-12);
  CHECK((diag_pairs[1].projector - diag2(0.0, 1.0)).operator_norm() < 1e-12);

  const Algebra m2({2});
  const auto scalar_pairs = eig(3.5 * identity(m2));
  REQUIRE(scalar_pairs.size() == 1);
  CHECK(scalar_pairs[0].eigenvalue == doctest::Approx(3.5));
  CHECK((scalar_pairs[0].projector - identity(m2)).operator_norm() < 1e-12);

  const Element x(m2, {pauli_x()});
  const auto pairs = eig(x);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].eigenvalue == doctest::Approx(-1.0));
  CHECK(pairs[1].eigenvalue == doctest::Approx(1.0));
  Matrix minus(2, 2), plus(2, 2);
  minus << 0.5, -0.5, -0.5, 0.5;
  plus << 0.5, 0.5, 0.5, 0.5;
  CHECK((pairs[0].projector - Element(m2, {minus})).operator_norm() < 1e-12);
  CHECK((pairs[1].projector - Element(m2, {plus})).operator_norm() < 1e-12);
}

TEST_CASE("eig rejects non-hermitian input") {
  Matrix m(2, 2);
  m << 0.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(eig(Element(Algebra({2}), {m})), std::invalid_argument);
}

TEST_CASE("eig projectors resolve the identity and reconstruct") {
  const Algebra a({2, 3});
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const Element x = random_hermitian(a, rng);
    const auto pairs = eig(x);
    Element sum = Element::zero(a);
    Element reconstructed = Element::zero(a);
    for (const auto& sp : pairs) {
      sum = sum + sp.projector;
      reconstructed = reconstructed + sp.eigenvalue * sp.projector;
      CHECK((sp.projector * sp.projector - sp.projector).operator_norm() < 1e-9);
    }
    for (std::size_t j = 0; j + 1 < pairs.size(); ++j) {
      CHECK((pairs[j].projector * pairs[j + 1].projector).operator_norm() < 1e-9);
    }
    CHECK((sum - identity(a)).operator_norm() < 1e-9);
    const double scale = std::max(1.0, x.operator_norm());
    CHECK((reconstructed - x).operator_norm() <= 10.0 * 1e-8 * scale);
  }
}

TEST_CASE("loewner order basics") {
  Rng rng(3);
  const Algebra a({3});
  const Element x = random_hermitian(a, rng);
  CHECK(loewner_leq(x, x));
  const Element p = random_projection(a, rng);
  CHECK(loewner_leq(Element::zero(a), p));
  CHECK(loewner_leq(diag2(1.0, 2.0), diag2(2.0, 3.0)));
  CHECK_FALSE(loewner_leq(diag2(2.0, 3.0), diag2(1.0, 2.0)));
  CHECK_THROWS_AS(loewner_leq(x, diag2(0.0, 1.0)), std::invalid_argument);

  // transitivity on sampled chains built from positive increments
  for (int i = 0; i < 25; ++i) {
    const Element base = random_hermitian(a, rng);
    const Element mid = base + random_positive(a, rng);
    const Element top = mid + random_positive(a, rng);
    CHECK(loewner_leq(base, mid));
    CHECK(loewner_leq(mid, top));
    CHECK(loewner_leq(base, top));
  }
}

TEST_CASE("orthogonality predicate") {
  CHECK(orthogonal(diag2(1.0, 0.0), diag2(0.0, 1.0)));
  const Algebra a({2});
  Rng rng(5);
  const Element x = random_hermitian(a, rng);
  CHECK(orthogonal(x, Element::zero(a)));
  const Element p = diag2(1.0, 0.0);
  CHECK_FALSE(orthogonal(p, p));
}

TEST_CASE("positive and negative parts") {
  const auto [p1, n1] = pos_neg_parts(diag2(1.0, -2.0));
  CHECK((p1 - diag2(1.0, 0.0)).operator_norm() < 1e-12);
  CHECK((n1 - diag2(0.0, 2.0)).operator_norm() < 1e-12);

  Rng rng(9);
  const Algebra a({3});
  const Element pos = random_positive(a, rng);
  const auto [p2, n2] = pos_neg_parts(pos);
  CHECK((p2 - pos).operator_norm() < 1e-9);
  CHECK(n2.operator_norm() < 1e-9);

  const Element x(Algebra({2}), {pauli_x()});
  const auto [p3, n3] = pos_neg_parts(x);
  Matrix plus(2, 2), minus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  minus << 0.5, -0.5, -0.5, 0.5;
  CHECK((p3 - Element(Algebra({2}), {plus})).operator_norm() < 1e-12);
  CHECK((n3 - Element(Algebra({2}), {minus})).operator_norm() < 1e-12);

  for (int i = 0; i < 40; ++i) {
    const Element h = random_hermitian(a, rng);
    const auto [hp, hn] = pos_neg_parts(h);
    const double scale = std::max(1.0, h.operator_norm());
    CHECK((h - (hp - hn)).operator_norm() <= 1e-9 * scale);
    CHECK((hp * hn).operator_norm() <= 1e-9 * scale * scale);
  }
}

TEST_CASE("effects") {
  Rng rng(13);
  const Algebra a({3});
  CHECK(is_effect(random_projection(a, rng)));
  CHECK_FALSE(is_effect(2.0 * identity(a)));
  CHECK(is_effect(diag2(0.3, 0.9)));
  CHECK_FALSE(is_effect(diag2(-0.1, 0.5)));
}

TEST_CASE("corner compression") {
  const Algebra m3({3});
  Matrix e(3, 3), x(3, 3);
  e.setZero();
  e(0, 0) = 1.0;
  e(1, 1) = 1.0;
  x.setZero();
  x(0, 0) = 0.5;
  x(1, 1) = 1.0;

  SUBCASE("full corner is the identity map") {
    Rng rng(1);
    const Element h = random_hermitian(m3, rng);
    const Element compressed = corner(identity(m3), h);
    CHECK(compressed.algebra() == m3);
    CHECK((compressed - h).operator_norm() < 1e-9);
  }

  SUBCASE("two-dimensional corner of a diagonal element") {
    const Element compressed = corner(Element(m3, {e}), Element(m3, {x}));
    CHECK(compressed.algebra() == Algebra({2}));
    const auto pairs = eig(compressed);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].eigenvalue == doctest::Approx(0.5));
    CHECK(pairs[1].eigenvalue == doctest::Approx(1.0));
  }

  SUBCASE("rank-one corner is the expectation value") {
    Rng rng(2);
    const Element h = random_hermitian(m3, rng);
    const auto spectral = eig(h);
    const Element p = spectral.front().projector;  // rank one generically
    const Element supported = (p * h * p).hermitized();
    const Element compressed = corner(p, supported);
    CHECK(compressed.algebra() == Algebra({1}));
    // the compressed scalar is <v, h v> for the unit vector spanning p
    CHECK(compressed.block(0)(0, 0).real() ==
          doctest::Approx(spectral.front().eigenvalue));
  }

  SUBCASE("unsupported elements are rejected") {
    Rng rng(3);
    const Element h = random_hermitian(m3, rng);
    CHECK_THROWS_AS(corner(Element(m3, {e}), h), std::invalid_argument);
  }

  SUBCASE("embedding inverts compression on supported elements") {
    Rng rng(4);
    const Algebra a({2, 3});
    const Element p = random_projection(a, rng);
    const CornerBasis cb = corner_basis(p);
    const Element supported = (p * random_hermitian(a, rng) * p).hermitized();
    const Element lifted = corner_embed(cb, corner_compress(cb, supported));
    CHECK((lifted - supported).operator_norm() < 1e-10);
    const Element small = corner_compress(cb, supported);
    CHECK((corner_compress(cb, corner_embed(cb, small)) - small).operator_norm() <
          1e-12);
  }

  SUBCASE("zero projection has no corner") {
    CHECK_THROWS_AS(corner_basis(Element::zero(m3)), std::invalid_argument);
  }
}

TEST_CASE("scalar detection") {
  const Algebra a({2, 3});
  CHECK(scalar_of(2.5 * identity(a)).value() == doctest::Approx(2.5));
  Rng rng(4);
  CHECK_FALSE(scalar_of(random_hermitian(a, rng)).has_value());
}

TEST_CASE("tolerance profile validation") {
  ToleranceProfile tol;
  CHECK_NOTHROW(tol.validate());
  tol.psd_floor = 0.0;
  CHECK_THROWS_AS(tol.validate(), std::invalid_argument);
}
