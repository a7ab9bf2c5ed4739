#include <doctest.h>

#include <cmath>
#include <vector>

#include <specord/order.hpp>
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

Element diag3(double a, double b, double c) {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return Element(Algebra({3}), {m});
}

Element halfsum() {
  Matrix m(2, 2);
  m << 0.5, 0.5, 0.5, 0.5;
  return Element(m2, {m});
}

}  // namespace

TEST_CASE("spectral order is reflexive and matches the diagonal order") {
  Rng rng(41);
  const Element x = random_hermitian(Algebra({3}), rng);
  CHECK(spectral_leq(x, x));
  CHECK(spectral_leq(diag2(1.0, 2.0), diag2(2.0, 3.0)));
  CHECK_FALSE(spectral_leq(diag2(2.0, 3.0), diag2(1.0, 2.0)));
  CHECK_THROWS_AS(spectral_leq(x, diag2(0.0, 1.0)), std::invalid_argument);
}

TEST_CASE("loewner-comparable but spectrally incomparable fixture") {
  // frozen regression pair in the two-by-two factor
  const Element x = diag2(1.5, 0.0);
  Matrix yb(2, 2);
  yb << 2.0, 1.0, 1.0, 2.0;
  const Element y(m2, {yb});

  CHECK(loewner_leq(x, y));
  CHECK_FALSE(spectral_leq(x, y));

  const SpectralFamily fx = family_of(x);
  const SpectralFamily fy = family_of(y);
  const SpectralFamily fams[] = {fx, fy};
  double gap = 0.0;
  for (double lambda : merged_breakpoints(fams)) {
    const Element ey = fy.evaluate(lambda);
    gap = std::max(gap, (ey * fx.evaluate(lambda) - ey).operator_norm());
  }
  CHECK(gap >= 1e-3);

  // randomized search over positive shifts finds more such pairs
  Rng rng(42);
  int found = 0;
  for (int i = 0; i < 50; ++i) {
    const Element a = random_hermitian(m2, rng);
    const Element b = a + random_positive(m2, rng);
    REQUIRE(loewner_leq(a, b));
    if (!spectral_leq(a, b)) ++found;
  }
  CHECK(found > 0);
}

TEST_CASE("sup and inf of two transversal projections") {
  const Element p = diag2(1.0, 0.0);
  const Element q = halfsum();
  CHECK((spectral_sup(p, q) - identity(m2)).operator_norm() < 1e-9);
  CHECK(spectral_inf(p, q).operator_norm() < 1e-9);
}

TEST_CASE("singleton and empty sets") {
  Rng rng(43);
  const Element x = random_hermitian(Algebra({3}), rng);
  const Element xs[] = {x};
  CHECK((spectral_sup(xs) - x).operator_norm() < 1e-9);
  CHECK((spectral_inf(xs) - x).operator_norm() < 1e-9);
  CHECK_THROWS_AS(spectral_sup(std::span<const Element>{}), std::invalid_argument);
}

TEST_CASE("order properties on random data") {
  Rng rng(44);
  const Algebra a({2, 3});
  const Element one = identity(a);
  for (int i = 0; i < 30; ++i) {
    const Element x = random_hermitian(a, rng);
    const Element y = random_hermitian(a, rng);
    const Element z = random_hermitian(a, rng);

    // lub/glb and coarsening into the Loewner order
    const Element s2 = spectral_sup(x, y);
    const Element s3 = spectral_sup(s2, z);
    CHECK(spectral_leq(x, s2));
    CHECK(spectral_leq(s2, s3));
    CHECK(spectral_leq(x, s3));  // transitivity along the chain
    CHECK(loewner_leq(x, s2));

    // antisymmetry
    if (spectral_leq(x, y) && spectral_leq(y, x)) {
      CHECK((x - y).operator_norm() <= 1e-7);
    }

    // affine reparametrization
    const double alpha = rng.uniform(0.1, 2.5);
    const double beta = rng.uniform(-2.0, 2.0);
    CHECK(spectral_leq(x, s2) ==
          spectral_leq(alpha * x + beta * one, alpha * s2 + beta * one));

    // commuting pairs compare exactly as in the Loewner order
    Rng urng = rng.substream(99 + static_cast<std::uint64_t>(i));
    const Element u = random_unitary(a, urng);
    std::vector<Matrix> d1, d2;
    for (int k = 0; k < a.block_count(); ++k) {
      const int n = a.block_dim(k);
      Eigen::VectorXd v1(n), v2(n);
      for (int j = 0; j < n; ++j) {
        v1(j) = rng.normal();
        v2(j) = rng.normal();
      }
      d1.push_back(u.block(k) * v1.cast<Complex>().asDiagonal() *
                   u.block(k).adjoint());
      d2.push_back(u.block(k) * v2.cast<Complex>().asDiagonal() *
                   u.block(k).adjoint());
    }
    const Element cx = Element(a, d1).hermitized();
    const Element cy = Element(a, d2).hermitized();
    CHECK(spectral_leq(cx, cy) == loewner_leq(cx, cy));
  }
}

TEST_CASE("regularized infimum collapses to the pointwise join") {
  Rng rng(45);
  const Algebra a({3});
  for (int i = 0; i < 20; ++i) {
    std::vector<SpectralFamily> fams;
    const int count = rng.uniform_int(2, 4);
    for (int j = 0; j < count; ++j) fams.push_back(family_of(random_hermitian(a, rng)));
    CHECK(families_equal(inf_family(fams), inf_family_regularized(fams)));
  }
}

TEST_CASE("supremum of orthogonal elements") {
  const Element x = diag3(1.0, 0.0, 0.0);
  const Element y = diag3(0.0, 0.0, -2.0);
  const auto cert = sup_orthogonal(x, y);
  CHECK((cert.value - diag3(1.0, 0.0, 0.0)).operator_norm() < 1e-12);
  CHECK(cert.certificate_deviation < 1e-8);

  const Element zero = Element::zero(Algebra({3}));
  CHECK(sup_orthogonal(zero, zero).value.operator_norm() < 1e-12);

  Rng rng(46);
  const Algebra a({2, 3});
  for (int i = 0; i < 25; ++i) {
    auto [u, v] = random_orthogonal_pair(a, rng);
    CHECK(sup_orthogonal(u, v).certificate_deviation <= 1e-8);
  }

  CHECK_THROWS_AS(sup_orthogonal(diag2(1.0, 0.0), halfsum()), std::invalid_argument);
}

TEST_CASE("supremum of scaled projections") {
  const Element p = diag2(1.0, 0.0);
  const Element q = halfsum();

  SUBCASE("worked instance") {
    const auto cert = sup_scaled_projections(0.5, p, 1.0, q);
    Matrix expected(2, 2);
    expected << 0.75, 0.25, 0.25, 0.75;
    CHECK((cert.value - Element(m2, {expected})).operator_norm() < 1e-12);
    CHECK(cert.certificate_deviation <= 1e-8);
  }

  SUBCASE("vanishing first coefficient") {
    const auto cert = sup_scaled_projections(0.0, p, 0.7, q);
    CHECK((cert.value - 0.7 * q).operator_norm() < 1e-12);
  }

  SUBCASE("equal coefficients and equal projections") {
    const auto cert = sup_scaled_projections(1.0, p, 1.0, p);
    CHECK((cert.value - p).operator_norm() < 1e-9);
  }

  SUBCASE("ordering is enforced") {
    CHECK_THROWS_AS(sup_scaled_projections(2.0, p, 1.0, q), std::invalid_argument);
    CHECK_THROWS_AS(sup_scaled_projections(-1.0, p, 1.0, q), std::invalid_argument);
  }

  SUBCASE("random certificates") {
    Rng rng(47);
    const Algebra a({3});
    for (int i = 0; i < 40; ++i) {
      const double alpha = rng.uniform(0.0, 2.0);
      const double beta = alpha + rng.uniform(0.0, 2.0);
      const auto cert = sup_scaled_projections(alpha, random_projection(a, rng), beta,
                                               random_projection(a, rng));
      CHECK(cert.certificate_deviation <= 1e-8);
    }
  }
}

TEST_CASE("spectral distributivity characterizes the center") {
  SUBCASE("scalars are distributive") {
    const auto result = is_spectrally_distributive(1.3 * identity(m2), 10, 7);
    CHECK(result.distributive);
    CHECK(result.worst_deviation <= 1e-7);
  }

  SUBCASE("non-central diagonal yields the worked witness") {
    const auto result = is_spectrally_distributive(diag2(1.0, 2.0), 10, 7);
    CHECK_FALSE(result.distributive);
    REQUIRE(result.witness.has_value());
    CHECK(result.worst_deviation >= 1e-6);
    // the witness pair is built over the projector onto (1,1)/sqrt(2)
    const auto& [wx, wy] = *result.witness;
    const double norm = diag2(1.0, 2.0).operator_norm();
    CHECK((wx + wy).operator_norm() < 1e-9);
    CHECK(wx.operator_norm() == doctest::Approx(norm));
  }

  SUBCASE("blockwise scalars are distributive") {
    Rng rng(48);
    const Algebra a({2, 3});
    const Element z = random_central(a, rng);
    const auto result = is_spectrally_distributive(z, 25, 11);
    CHECK(result.distributive);
    CHECK(result.worst_deviation <= 1e-7);
  }
}

TEST_CASE("chains below an effect") {
  SUBCASE("scalar multiple of an atom") {
    const Element x = (1.0 / 3.0) * diag2(1.0, 0.0);
    const auto result = chain_below(x);
    CHECK(result.scalar_atom);
    CHECK(result.lambda == doctest::Approx(1.0 / 3.0));
    REQUIRE(result.atom.has_value());
    CHECK((*result.atom - diag2(1.0, 0.0)).operator_norm() < 1e-12);
  }

  SUBCASE("scalar multiple of the identity splits") {
    const auto result = chain_below(0.5 * identity(m2));
    CHECK_FALSE(result.scalar_atom);
    REQUIRE(result.witness.has_value());
    const auto& [y, z] = *result.witness;
    CHECK(spectral_leq(y, 0.5 * identity(m2)));
    CHECK(spectral_leq(z, 0.5 * identity(m2)));
    CHECK_FALSE(spectral_leq(y, z));
    CHECK_FALSE(spectral_leq(z, y));
  }

  SUBCASE("two distinct levels split along the spectrum") {
    const Element x = diag2(0.25, 0.75);
    const auto result = chain_below(x);
    CHECK_FALSE(result.scalar_atom);
    REQUIRE(result.witness.has_value());
    const auto& [y, z] = *result.witness;
    CHECK((y - diag2(0.25, 0.0)).operator_norm() < 1e-12);
    CHECK((z - diag2(0.0, 0.75)).operator_norm() < 1e-12);
    CHECK(spectral_leq(y, x));
    CHECK(spectral_leq(z, x));
    CHECK_FALSE(spectral_leq(y, z));
    CHECK_FALSE(spectral_leq(z, y));
  }

  SUBCASE("rejects zero and non-effects") {
    CHECK_THROWS_AS(chain_below(Element::zero(m2)), std::invalid_argument);
    CHECK_THROWS_AS(chain_below(2.0 * identity(m2)), std::invalid_argument);
  }
}

TEST_CASE("class closure under sup and inf") {
  Rng rng(49);
  const Algebra a({2, 3});

  SUBCASE("projections reduce to the lattice operations") {
    std::vector<Element> ps;
    for (int i = 0; i < 3; ++i) ps.push_back(random_projection(a, rng));
    const auto report = sup_inf_closure_check(ps, ElementClass::projection);
    CHECK(report.closed);
    CHECK(report.worst_deviation <= 1e-8);
  }

  SUBCASE("effects stay effects") {
    std::vector<Element> es;
    for (int i = 0; i < 5; ++i) es.push_back(random_effect(a, rng));
    const auto report = sup_inf_closure_check(es, ElementClass::effect);
    CHECK(report.closed);
  }

  SUBCASE("positives stay positive") {
    std::vector<Element> xs;
    for (int i = 0; i < 4; ++i) xs.push_back(random_positive(a, rng));
    const auto report = sup_inf_closure_check(xs, ElementClass::positive);
    CHECK(report.closed);
  }
}

TEST_CASE("corner independence of sup and inf") {
  Rng rng(50);
  const Algebra a({3});

  SUBCASE("full corner is a tautology") {
    std::vector<Element> xs;
    for (int i = 0; i < 2; ++i) xs.push_back(random_hermitian(a, rng));
    const auto report = independence_check(identity(a), xs);
    CHECK(report.sup_deviation <= 1e-7);
    CHECK(report.inf_deviation <= 1e-7);
  }

  SUBCASE("proper corners") {
    for (int i = 0; i < 20; ++i) {
      const Element e = random_projection(a, rng);
      std::vector<Element> xs;
      const int count = (i % 3 == 0) ? 1 : 2;
      for (int j = 0; j < count; ++j) {
        xs.push_back((e * random_hermitian(a, rng) * e).hermitized());
      }
      const auto report = independence_check(e, xs);
      CHECK(report.sup_deviation <= 1e-7);
      CHECK(report.inf_deviation <= 1e-7);
    }
  }

  SUBCASE("unsupported members are rejected") {
    const Element e = random_projection(a, rng);
    if (projection_rank(e) < 3) {
      std::vector<Element> xs{random_hermitian(a, rng)};
      CHECK_THROWS_AS(independence_check(e, xs), std::invalid_argument);
    }
  }
}

TEST_CASE("increasing abelian chains satisfy the meet-join exchange") {
  Rng rng(51);
  const Algebra a({1, 1, 1, 1});
  for (int i = 0; i < 30; ++i) {
    // increasing 0/1 chains
    std::vector<std::vector<double>> ps{{0, 0, 0, 0}}, qs{{0, 0, 0, 0}};
    for (auto* chain : {&ps, &qs}) {
      for (auto& v : chain->front()) v = rng.bernoulli(0.4) ? 1.0 : 0.0;
      for (int s = 1; s < 3; ++s) {
        auto next = chain->back();
        for (auto& v : next) {
          if (v == 0.0 && rng.bernoulli(0.4)) v = 1.0;
        }
        chain->push_back(next);
      }
    }
    const auto as_projection = [&](const std::vector<double>& d) {
      std::vector<Matrix> blocks;
      for (double v : d) {
        Matrix b(1, 1);
        b(0, 0) = v;
        blocks.push_back(b);
      }
      return Element(a, blocks);
    };
    std::vector<Element> joins;
    for (int s = 0; s < 3; ++s) {
      joins.push_back(join(as_projection(ps[static_cast<std::size_t>(s)]),
                           as_projection(qs[static_cast<std::size_t>(s)])));
    }
    const Element lhs = meet_all(joins);
    const Element rhs = join(as_projection(ps.front()), as_projection(qs.front()));
    CHECK((lhs - rhs).operator_norm() < 1e-12);
  }
}
