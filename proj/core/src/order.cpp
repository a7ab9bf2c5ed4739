#include <specord/order.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <specord/rng.hpp>

namespace specord {

bool spectral_leq(const SpectralFamily& fx, const SpectralFamily& fy,
                  const ToleranceProfile& tol) {
  if (!(fx.algebra() == fy.algebra())) fail("algebra mismatch");
  const SpectralFamily fams[] = {fx, fy};
  for (double lambda : merged_breakpoints(fams)) {
    if (!proj_leq(fy.evaluate(lambda), fx.evaluate(lambda), tol)) return false;
  }
  return true;
}

bool spectral_leq(const Element& x, const Element& y, const ToleranceProfile& tol) {
  expect_same_algebra(x, y);
  return spectral_leq(family_of(x, tol), family_of(y, tol), tol);
}

namespace {

SpectralFamily family_from_grid_values(
    const Algebra& algebra, const std::vector<double>& grid,
    const std::vector<Element>& values, const ToleranceProfile& tol) {
  std::vector<Breakpoint> kept;
  Element previous = Element::zero(algebra);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if ((values[i] - previous).operator_norm() > tol.proj_tol) {
      kept.push_back({grid[i], values[i]});
      previous = values[i];
    }
  }
  return SpectralFamily(algebra, std::move(kept), tol);
}

std::vector<SpectralFamily> families_of(std::span<const Element> xs,
                                        const ToleranceProfile& tol) {
  if (xs.empty()) fail("spectral sup/inf: empty set");
  std::vector<SpectralFamily> fams;
  fams.reserve(xs.size());
  for (const Element& x : xs) {
    expect_same_algebra(xs.front(), x);
    fams.push_back(family_of(x, tol));
  }
  return fams;
}

std::vector<Element> pointwise_join(std::span<const SpectralFamily> families,
                                    const std::vector<double>& grid,
                                    const ToleranceProfile& tol) {
  std::vector<Element> joins;
  joins.reserve(grid.size());
  std::vector<Element> at;
  for (double lambda : grid) {
    at.clear();
    for (const SpectralFamily& f : families) at.push_back(f.evaluate(lambda));
    joins.push_back(join_all(at, tol));
  }
  return joins;
}

}  // namespace

SpectralFamily sup_family(std::span<const SpectralFamily> families,
                          const ToleranceProfile& tol) {
  if (families.empty()) fail("spectral sup: empty set");
  const Algebra& algebra = families.front().algebra();
  const std::vector<double> grid = merged_breakpoints(families);
  std::vector<Element> meets;
  meets.reserve(grid.size());
  std::vector<Element> at;
  for (double lambda : grid) {
    at.clear();
    for (const SpectralFamily& f : families) {
      if (!(f.algebra() == algebra)) fail("algebra mismatch");
      at.push_back(f.evaluate(lambda));
    }
    meets.push_back(meet_all(at, tol));
  }
  return family_from_grid_values(algebra, grid, meets, tol);
}

SpectralFamily inf_family(std::span<const SpectralFamily> families,
                          const ToleranceProfile& tol) {
  if (families.empty()) fail("spectral inf: empty set");
  const Algebra& algebra = families.front().algebra();
  const std::vector<double> grid = merged_breakpoints(families);
  const std::vector<Element> joins = pointwise_join(families, grid, tol);
  SpectralFamily collapsed = family_from_grid_values(algebra, grid, joins, tol);
  SpectralFamily regularized = inf_family_regularized(families, tol);
  if (!families_equal(collapsed, regularized, tol)) {
    throw std::logic_error(
        "spectral inf: regularized and pointwise families disagree");
  }
  return collapsed;
}

SpectralFamily inf_family_regularized(std::span<const SpectralFamily> families,
                                      const ToleranceProfile& tol) {
  if (families.empty()) fail("spectral inf: empty set");
  const Algebra& algebra = families.front().algebra();
  const std::vector<double> grid = merged_breakpoints(families);

  // Sample the pointwise join strictly inside each gap to the right of a grid
  // point, then take the running meet from the right: the value at lambda_i is
  // the meet of the join over every mu > lambda_i.
  std::vector<double> probes;
  probes.reserve(grid.size());
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    probes.push_back(0.5 * (grid[i] + grid[i + 1]));
  }
  probes.push_back(grid.back() + 1.0);

  const std::vector<Element> joins_inside = pointwise_join(families, probes, tol);
  std::vector<Element> regularized(grid.size(), Element::zero(algebra));
  Element running = joins_inside.back();
  regularized.back() = running;
  for (std::size_t i = grid.size() - 1; i-- > 0;) {
    running = meet(running, joins_inside[i], tol);
    regularized[i] = running;
  }
  return family_from_grid_values(algebra, grid, regularized, tol);
}

Element spectral_sup(std::span<const Element> xs, const ToleranceProfile& tol) {
  const auto fams = families_of(xs, tol);
  return sup_family(fams, tol).reconstruct();
}

Element spectral_inf(std::span<const Element> xs, const ToleranceProfile& tol) {
  const auto fams = families_of(xs, tol);
  return inf_family(fams, tol).reconstruct();
}

Element spectral_sup(const Element& x, const Element& y, const ToleranceProfile& tol) {
  const Element xs[] = {x, y};
  return spectral_sup(xs, tol);
}

Element spectral_inf(const Element& x, const Element& y, const ToleranceProfile& tol) {
  const Element xs[] = {x, y};
  return spectral_inf(xs, tol);
}

Certified sup_orthogonal(const Element& x, const Element& y,
                         const ToleranceProfile& tol) {
  if (!orthogonal(x, y, tol)) fail("sup_orthogonal: inputs are not orthogonal");
  const Element value = pos_neg_parts(x, tol).first + pos_neg_parts(y, tol).first;
  const double deviation = (value - spectral_sup(x, y, tol)).operator_norm();
  if (deviation > 1e-6 * std::max(1.0, value.operator_norm())) {
    throw std::logic_error("sup_orthogonal: certificate failed");
  }
  return {value, deviation};
}

Certified sup_scaled_projections(double alpha, const Element& p, double beta,
                                 const Element& q, const ToleranceProfile& tol) {
  if (!(0.0 <= alpha && alpha <= beta)) {
    fail("sup_scaled_projections: requires 0 <= alpha <= beta");
  }
  expect_projection(p, tol);
  expect_projection(q, tol);
  expect_same_algebra(p, q);
  const Element value = alpha * (join(p, q, tol) - q) + beta * q;
  const double deviation =
      (value - spectral_sup(alpha * p, beta * q, tol)).operator_norm();
  if (deviation > 1e-6 * std::max(1.0, value.operator_norm())) {
    throw std::logic_error("sup_scaled_projections: certificate failed");
  }
  return {value, deviation};
}

namespace {

double distributive_law_deviation(const Element& z, const Element& x,
                                  const Element& y, const ToleranceProfile& tol) {
  const Element lhs = spectral_sup(z, spectral_inf(x, y, tol), tol);
  const Element rhs =
      spectral_inf(spectral_sup(z, x, tol), spectral_sup(z, y, tol), tol);
  return (lhs - rhs).operator_norm();
}

}  // namespace

DistributivityResult is_spectrally_distributive(const Element& z, int trials,
                                                std::uint64_t seed,
                                                const ToleranceProfile& tol) {
  expect_hermitian(z, tol);
  if (is_central(z, tol)) {
    DistributivityResult result{true, 0.0, std::nullopt};
    Rng root(seed);
    for (int t = 0; t < trials; ++t) {
      Rng rng = root.substream(static_cast<std::uint64_t>(t));
      const Element x = random_hermitian(z.algebra(), rng);
      const Element y = random_hermitian(z.algebra(), rng);
      result.worst_deviation = std::max(result.worst_deviation,
                                        distributive_law_deviation(z, x, y, tol));
    }
    return result;
  }

  std::optional<Element> witness_projection;
  const SpectralFamily fz = family_of(z, tol);
  for (const Breakpoint& bp : fz.breakpoints()) {
    if (!is_central(bp.projection, tol)) {
      witness_projection = central_proj_witness(bp.projection, tol);
      break;
    }
  }
  if (!witness_projection) {
    throw std::logic_error(
        "distributivity: non-central element with central spectral projections");
  }
  const double norm = z.operator_norm();
  const Element one = identity(z.algebra());
  const Element x = norm * (2.0 * *witness_projection - one);
  const Element y = norm * (one - 2.0 * *witness_projection);
  const double deviation = distributive_law_deviation(z, x, y, tol);
  return {false, deviation, std::make_pair(x, y)};
}

ChainClassification chain_below(const Element& x, const ToleranceProfile& tol) {
  if (!is_effect(x, tol)) fail("chain_below: input is not an effect");
  const double zero_width = tol.eig_cluster * std::max(1.0, x.operator_norm());
  std::vector<SpectralProjector> nonzero;
  for (const SpectralProjector& sp : eig(x, tol)) {
    if (sp.eigenvalue > zero_width) nonzero.push_back(sp);
  }
  if (nonzero.empty()) fail("chain_below: zero effect");

  ChainClassification result;
  if (nonzero.size() == 1) {
    const double lambda = nonzero.front().eigenvalue;
    const Element& e = nonzero.front().projector;
    if (is_atomic(e, tol)) {
      result.scalar_atom = true;
      result.lambda = lambda;
      result.atom = e;
      return result;
    }
    // split the eigenprojection: lambda p and lambda (e - p) are below x and
    // incomparable for any nonzero p strictly below e
    for (int k = 0; k < e.block_count(); ++k) {
      const double tr = e.block(k).trace().real();
      if (tr < 0.5) continue;
      Eigen::ColPivHouseholderQR<Matrix> qr(e.block(k));
      Matrix qmat = qr.householderQ();
      const Eigen::VectorXcd v = qmat.col(0);
      std::vector<Matrix> blocks;
      for (int j = 0; j < e.block_count(); ++j) {
        const int n = x.algebra().block_dim(j);
        blocks.push_back(j == k ? Matrix(v * v.adjoint()) : Matrix(Matrix::Zero(n, n)));
      }
      const Element p(x.algebra(), std::move(blocks));
      result.witness = std::make_pair(lambda * p, lambda * (e - p));
      return result;
    }
    throw std::logic_error("chain_below: eigenprojection has no range");
  }

  const double l1 = nonzero[0].eigenvalue;
  const double l2 = nonzero[1].eigenvalue;
  result.witness = std::make_pair(l1 * nonzero[0].projector, l2 * nonzero[1].projector);
  return result;
}

ClosureReport sup_inf_closure_check(std::span<const Element> xs, ElementClass cls,
                                    const ToleranceProfile& tol) {
  ClosureReport report;
  const Element sup = spectral_sup(xs, tol);
  const Element inf = spectral_inf(xs, tol);

  const auto positive_defect = [](const Element& v) {
    return std::max(0.0, -min_eigenvalue(v));
  };
  const auto effect_defect = [&](const Element& v) {
    return std::max(positive_defect(v), std::max(0.0, max_eigenvalue(v) - 1.0));
  };

  switch (cls) {
    case ElementClass::positive:
      report.worst_deviation = std::max(positive_defect(sup), positive_defect(inf));
      report.closed = is_positive(sup, tol) && is_positive(inf, tol);
      if (!report.closed) report.detail = "sup or inf left the positive cone";
      break;
    case ElementClass::effect:
      report.worst_deviation = std::max(effect_defect(sup), effect_defect(inf));
      report.closed = is_effect(sup, tol) && is_effect(inf, tol);
      if (!report.closed) report.detail = "sup or inf left the effect interval";
      break;
    case ElementClass::projection: {
      const double sup_dev = (sup - join_all(xs, tol)).operator_norm();
      const double inf_dev = (inf - meet_all(xs, tol)).operator_norm();
      report.worst_deviation = std::max(sup_dev, inf_dev);
      report.closed = is_projection(sup, tol) && is_projection(inf, tol) &&
                      report.worst_deviation <= 1e-8;
      if (!report.closed) report.detail = "sup/inf disagree with join/meet";
      break;
    }
  }
  return report;
}

IndependenceReport independence_check(const Element& e, std::span<const Element> xs,
                                      const ToleranceProfile& tol) {
  if (xs.empty()) fail("independence: empty set");
  const CornerBasis cb = corner_basis(e, tol);
  std::vector<Element> compressed;
  compressed.reserve(xs.size());
  for (const Element& x : xs) compressed.push_back(corner(e, x, tol));

  IndependenceReport report;
  const Element ambient_sup = spectral_sup(xs, tol);
  const Element ambient_inf = spectral_inf(xs, tol);
  report.sup_deviation =
      (corner_compress(cb, ambient_sup) - spectral_sup(compressed, tol)).operator_norm();
  report.inf_deviation =
      (corner_compress(cb, ambient_inf) - spectral_inf(compressed, tol)).operator_norm();
  return report;
}

}  // namespace specord
