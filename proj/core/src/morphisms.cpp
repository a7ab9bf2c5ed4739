#include <specord/morphisms.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace specord {

std::string to_string(DomainTag tag) {
  switch (tag) {
    case DomainTag::real: return "real";
    case DomainTag::positive: return "positive";
    case DomainTag::unit: return "unit";
  }
  return "real";
}

DomainTag domain_tag_from_string(const std::string& name) {
  if (name == "real") return DomainTag::real;
  if (name == "positive") return DomainTag::positive;
  if (name == "unit") return DomainTag::unit;
  fail("bijection domain: unknown tag '" + name + "'");
}

bool domain_contains(DomainTag tag, double t, double slack) {
  switch (tag) {
    case DomainTag::real: return std::isfinite(t);
    case DomainTag::positive: return t >= -slack;
    case DomainTag::unit: return t >= -slack && t <= 1.0 + slack;
  }
  return false;
}

double domain_clamp(DomainTag tag, double t, double slack) {
  if (!domain_contains(tag, t, slack)) {
    fail("calc: value outside the bijection domain");
  }
  switch (tag) {
    case DomainTag::real: return t;
    case DomainTag::positive: return std::max(t, 0.0);
    case DomainTag::unit: return std::clamp(t, 0.0, 1.0);
  }
  return t;
}

MonotoneBijection::MonotoneBijection(DomainTag domain, std::vector<Knot> knots)
    : domain_(domain), knots_(std::move(knots)) {
  if (knots_.empty()) fail("bijection: no knots");
  const std::size_t min_knots = (domain_ == DomainTag::unit) ? 2u : 2u;
  if (knots_.size() < min_knots) fail("bijection: needs at least two knots");
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i - 1].first < knots_[i].first) ||
        !(knots_[i - 1].second < knots_[i].second)) {
      fail("bijection: knots must be strictly increasing in both coordinates");
    }
  }
  const auto pinned = [](Knot& k, double x, double y) {
    if (std::abs(k.first - x) > 1e-9 || std::abs(k.second - y) > 1e-9) return false;
    k = {x, y};
    return true;
  };
  if (domain_ == DomainTag::unit) {
    if (!pinned(knots_.front(), 0.0, 0.0) || !pinned(knots_.back(), 1.0, 1.0)) {
      fail("bijection: unit domain requires endpoints (0,0) and (1,1)");
    }
  }
  if (domain_ == DomainTag::positive) {
    if (!pinned(knots_.front(), 0.0, 0.0)) {
      fail("bijection: positive domain requires the knot (0,0)");
    }
  }
}

MonotoneBijection MonotoneBijection::identity_on(DomainTag domain) {
  return MonotoneBijection(domain, {{0.0, 0.0}, {1.0, 1.0}});
}

double MonotoneBijection::operator()(double t) const {
  t = domain_clamp(domain_, t);
  const auto first_slope = [&] {
    return (knots_[1].second - knots_[0].second) /
           (knots_[1].first - knots_[0].first);
  };
  const auto last_slope = [&] {
    const std::size_t m = knots_.size();
    return (knots_[m - 1].second - knots_[m - 2].second) /
           (knots_[m - 1].first - knots_[m - 2].first);
  };
  if (t <= knots_.front().first) {
    return knots_.front().second + first_slope() * (t - knots_.front().first);
  }
  if (t >= knots_.back().first) {
    return knots_.back().second + last_slope() * (t - knots_.back().first);
  }
  auto it = std::upper_bound(
      knots_.begin(), knots_.end(), t,
      [](double v, const Knot& k) { return v < k.first; });
  const Knot& hi = *it;
  const Knot& lo = *std::prev(it);
  const double w = (t - lo.first) / (hi.first - lo.first);
  return lo.second + w * (hi.second - lo.second);
}

MonotoneBijection MonotoneBijection::inverse() const {
  std::vector<Knot> swapped;
  swapped.reserve(knots_.size());
  for (const Knot& k : knots_) swapped.push_back({k.second, k.first});
  return MonotoneBijection(domain_, std::move(swapped));
}

MonotoneBijection MonotoneBijection::compose_after(const MonotoneBijection& inner) const {
  if (inner.domain_ != domain_) fail("bijection: composed domains differ");
  const MonotoneBijection inner_inverse = inner.inverse();
  std::vector<double> xs;
  for (const Knot& k : inner.knots_) xs.push_back(k.first);
  for (const Knot& k : knots_) xs.push_back(inner_inverse(k.first));
  std::sort(xs.begin(), xs.end());
  std::vector<Knot> combined;
  for (double x : xs) {
    if (!combined.empty() &&
        x - combined.back().first <= 1e-14 * std::max(1.0, std::abs(x))) {
      continue;
    }
    combined.push_back({x, (*this)(inner(x))});
  }
  return MonotoneBijection(domain_, std::move(combined));
}

bool MonotoneBijection::fixes_zero(double tol) const {
  if (domain_ != DomainTag::real) return true;
  return std::abs((*this)(0.0)) <= tol;
}

JordanSpec::JordanSpec(Algebra source, std::vector<int> perm,
                       std::vector<Matrix> unitaries, std::vector<bool> transposed,
                       const ToleranceProfile& tol)
    : source_(std::move(source)),
      target_(source_),
      perm_(std::move(perm)),
      unitaries_(std::move(unitaries)),
      transposed_(std::move(transposed)) {
  const std::size_t m = static_cast<std::size_t>(source_.block_count());
  if (perm_.size() != m || unitaries_.size() != m || transposed_.size() != m) {
    fail("jordan: per-block data does not match the signature");
  }
  std::vector<bool> seen(m, false);
  Signature target_signature(m, 0);
  for (std::size_t k = 0; k < m; ++k) {
    const int slot = perm_[k];
    if (slot < 0 || slot >= static_cast<int>(m) || seen[static_cast<std::size_t>(slot)]) {
      fail("jordan: block permutation is not a permutation");
    }
    seen[static_cast<std::size_t>(slot)] = true;
    const int n = source_.block_dim(static_cast<int>(k));
    if (unitaries_[k].rows() != n || unitaries_[k].cols() != n) {
      fail("jordan: unitary shape does not match its block");
    }
    if ((unitaries_[k] * unitaries_[k].adjoint() - Matrix::Identity(n, n))
            .operatorNorm() > tol.proj_tol) {
      fail("jordan: block map is not unitary");
    }
    target_signature[static_cast<std::size_t>(slot)] = n;
  }
  target_ = Algebra(target_signature);
}

JordanSpec JordanSpec::identity_on(const Algebra& algebra) {
  std::vector<int> perm(static_cast<std::size_t>(algebra.block_count()));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Matrix> unitaries;
  for (int k = 0; k < algebra.block_count(); ++k) {
    unitaries.push_back(Matrix::Identity(algebra.block_dim(k), algebra.block_dim(k)));
  }
  return JordanSpec(algebra, std::move(perm), std::move(unitaries),
                    std::vector<bool>(static_cast<std::size_t>(algebra.block_count()), false));
}

JordanSpec JordanSpec::transpose_on(const Algebra& algebra) {
  JordanSpec j = identity_on(algebra);
  return JordanSpec(algebra, j.perm(), j.unitaries(),
                    std::vector<bool>(static_cast<std::size_t>(algebra.block_count()), true));
}

JordanSpec JordanSpec::inverse() const {
  const std::size_t m = perm_.size();
  std::vector<int> inv_perm(m, 0);
  std::vector<Matrix> inv_unitaries(m);
  std::vector<bool> inv_flags(m, false);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t slot = static_cast<std::size_t>(perm_[k]);
    inv_perm[slot] = static_cast<int>(k);
    inv_unitaries[slot] =
        transposed_[k] ? Matrix(unitaries_[k].transpose()) : Matrix(unitaries_[k].adjoint());
    inv_flags[slot] = transposed_[k];
  }
  return JordanSpec(target_, std::move(inv_perm), std::move(inv_unitaries),
                    std::move(inv_flags));
}

JordanSpec JordanSpec::compose_after(const JordanSpec& inner) const {
  if (!(inner.target_ == source_)) fail("jordan: composition algebra mismatch");
  const std::size_t m = inner.perm_.size();
  std::vector<int> perm(m, 0);
  std::vector<Matrix> unitaries(m);
  std::vector<bool> flags(m, false);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t mid = static_cast<std::size_t>(inner.perm_[k]);
    perm[k] = perm_[mid];
    const bool outer_t = transposed_[mid];
    unitaries[k] = outer_t ? Matrix(unitaries_[mid] * inner.unitaries_[k].conjugate())
                           : Matrix(unitaries_[mid] * inner.unitaries_[k]);
    flags[k] = inner.transposed_[k] != outer_t;
  }
  return JordanSpec(inner.source_, std::move(perm), std::move(unitaries),
                    std::move(flags));
}

Element apply_jordan(const JordanSpec& j, const Element& x) {
  if (!(x.algebra() == j.source())) fail("jordan: signature mismatch");
  std::vector<Matrix> blocks(static_cast<std::size_t>(j.target().block_count()));
  for (int k = 0; k < x.block_count(); ++k) {
    const Matrix& u = j.unitaries()[static_cast<std::size_t>(k)];
    const Matrix base =
        j.transposed()[static_cast<std::size_t>(k)] ? Matrix(x.block(k).transpose()) : x.block(k);
    blocks[static_cast<std::size_t>(j.perm()[static_cast<std::size_t>(k)])] =
        u * base * u.adjoint();
  }
  return Element(j.target(), std::move(blocks));
}

Element theta(const JordanSpec& j, const Element& x, const ToleranceProfile& tol) {
  const SpectralFamily f = family_of(x, tol);
  std::vector<Breakpoint> transported;
  transported.reserve(f.size());
  for (const Breakpoint& bp : f.breakpoints()) {
    transported.push_back({bp.lambda, apply_jordan(j, bp.projection)});
  }
  const Element result =
      SpectralFamily(j.target(), std::move(transported), tol).reconstruct();
  const Element direct = apply_jordan(j, x);
  if ((result - direct).operator_norm() >
      1e-7 * std::max(1.0, x.operator_norm())) {
    throw std::logic_error("theta: family transport disagrees with the blockwise action");
  }
  return result;
}

namespace {

template <typename Fn>
Element apply_scalar_map(const Element& x, Fn&& fn, const ToleranceProfile& tol) {
  Element result = Element::zero(x.algebra());
  for (const SpectralProjector& sp : eig(x, tol)) {
    result = result + fn(sp.eigenvalue) * sp.projector;
  }
  return result.hermitized();
}

}  // namespace

Element apply_calc(const MonotoneBijection& f, const Element& x,
                   const ToleranceProfile& tol) {
  const auto pairs = eig(x, tol);
  for (const SpectralProjector& sp : pairs) {
    if (!domain_contains(f.domain(), sp.eigenvalue)) {
      fail("calc: spectrum outside the bijection domain");
    }
  }
  Element result = Element::zero(x.algebra());
  for (const SpectralProjector& sp : pairs) {
    result = result + f(sp.eigenvalue) * sp.projector;
  }
  result = result.hermitized();

  // Family identity check: the image family re-derived from the result must
  // run through the same chain of cumulative projections as the source, with
  // jump values relabelled by f.
  const SpectralFamily fx = family_of(x, tol);
  const SpectralFamily fy = family_of(result, tol);
  if (chain_alignment_defect(fy, fx) > 1e-6) {
    throw std::logic_error("calc: eigenvalue map broke the spectral family identity");
  }
  if (fy.size() == fx.size()) {
    double scale = 1.0;
    for (const Breakpoint& bp : fy.breakpoints()) {
      scale = std::max(scale, std::abs(bp.lambda));
    }
    for (std::size_t i = 0; i < fy.size(); ++i) {
      const double expected =
          f(domain_clamp(f.domain(), fx.breakpoints()[i].lambda));
      if (std::abs(fy.breakpoints()[i].lambda - expected) > 1e-6 * scale) {
        throw std::logic_error(
            "calc: eigenvalue map broke the spectral family identity");
      }
    }
  }
  return result;
}

IsoPipeline::IsoPipeline(Algebra source, std::vector<Step> steps,
                         std::optional<DomainTag> domain, const ToleranceProfile& tol)
    : source_(std::move(source)),
      target_(source_),
      domain_(domain.value_or(DomainTag::real)),
      steps_(std::move(steps)) {
  std::optional<DomainTag> calc_domain;
  Algebra current = source_;
  for (const Step& step : steps_) {
    if (const auto* calc = std::get_if<MonotoneBijection>(&step)) {
      if (calc_domain && *calc_domain != calc->domain()) {
        fail("pipeline: calculus steps use different domains");
      }
      calc_domain = calc->domain();
    } else {
      const auto& jordan = std::get<JordanSpec>(step);
      if (!(jordan.source() == current)) {
        fail("pipeline: transport step does not match the current signature");
      }
      current = jordan.target();
    }
  }
  target_ = current;
  if (calc_domain) {
    if (domain && *domain != *calc_domain) {
      fail("pipeline: declared domain conflicts with the calculus steps");
    }
    domain_ = *calc_domain;
  } else if (domain) {
    domain_ = *domain;
  }
  (void)tol;
}

IsoPipeline IsoPipeline::identity_on(const Algebra& algebra, DomainTag domain) {
  return IsoPipeline(algebra, {}, domain);
}

Element IsoPipeline::apply(const Element& x, const ToleranceProfile& tol) const {
  if (!(x.algebra() == source_)) fail("pipeline: element algebra mismatch");
  Element current = x;
  for (const Step& step : steps_) {
    if (const auto* calc = std::get_if<MonotoneBijection>(&step)) {
      current = apply_calc(*calc, current, tol);
    } else {
      current = theta(std::get<JordanSpec>(step), current, tol);
    }
  }
  return current;
}

double IsoPipeline::scalar_action(double lambda) const {
  double value = lambda;
  for (const Step& step : steps_) {
    if (const auto* calc = std::get_if<MonotoneBijection>(&step)) {
      value = (*calc)(value);
    }
  }
  return value;
}

double IsoPipeline::scalar_action_inverse(double mu) const {
  double value = mu;
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
    if (const auto* calc = std::get_if<MonotoneBijection>(&*it)) {
      value = calc->inverse()(value);
    }
  }
  return value;
}

MonotoneBijection composed_calc(const IsoPipeline& pipeline) {
  MonotoneBijection acc = MonotoneBijection::identity_on(pipeline.domain());
  for (const IsoPipeline::Step& step : pipeline.steps()) {
    if (const auto* calc = std::get_if<MonotoneBijection>(&step)) {
      acc = calc->compose_after(acc);
    }
  }
  return acc;
}

std::optional<JordanSpec> composed_jordan(const IsoPipeline& pipeline) {
  std::optional<JordanSpec> acc;
  for (const IsoPipeline::Step& step : pipeline.steps()) {
    if (const auto* jordan = std::get_if<JordanSpec>(&step)) {
      acc = acc ? jordan->compose_after(*acc) : *jordan;
    }
  }
  return acc;
}

namespace {

double projection_defect(const Element& q) {
  return std::max((q * q - q).operator_norm(), q.hermitian_defect());
}

// Piecewise-linear interpolation through (grid, samples); the grid is
// ascending but the samples may be arbitrary (tampered grids are reported
// through the residual, never rejected here).
double interpolate_samples(std::span<const double> grid,
                           std::span<const double> samples, double t) {
  if (t <= grid.front()) return samples.front();
  if (t >= grid.back()) return samples.back();
  const auto it = std::upper_bound(grid.begin(), grid.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - grid.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - grid[lo]) / (grid[hi] - grid[lo]);
  return samples[lo] + w * (samples[hi] - samples[lo]);
}

// Transport of x through tau with mapped eigenvalues: builds
// sum f(lambda_i) (tau(E_i) - tau(E_{i-1})) over the cumulative projections.
template <typename Tau, typename F>
Element transported_image(const Element& x, Tau&& tau, F&& fmap,
                          const Algebra& target, const ToleranceProfile& tol) {
  const auto pairs = eig(x, tol);
  Element cumulative = Element::zero(x.algebra());
  Element previous_image = Element::zero(target);
  Element result = Element::zero(target);
  for (const SpectralProjector& sp : pairs) {
    cumulative = (cumulative + sp.projector).hermitized();
    const Element image = tau(cumulative);
    result = result + fmap(sp.eigenvalue) * (image - previous_image);
    previous_image = image;
  }
  return result.hermitized();
}

}  // namespace

CanonicalDecomposition canonical_decompose(const IsoPipeline& phi, int probes,
                                           std::uint64_t seed,
                                           const ToleranceProfile& tol) {
  if (!phi.source().is_factor() || !phi.target().is_factor()) {
    fail("decompose: source and target must be factors");
  }
  CanonicalDecomposition out;
  const Element one = identity(phi.source());
  const int divisions = 1024;
  out.grid.reserve(static_cast<std::size_t>(divisions) + 1);
  out.f_samples.reserve(static_cast<std::size_t>(divisions) + 1);
  const double n = static_cast<double>(phi.target().total_dim());
  for (int i = 0; i <= divisions; ++i) {
    const double lambda = static_cast<double>(i) / divisions;
    const Element image = phi.apply(lambda * one, tol);
    const double mu = image.trace().real() / n;
    const double defect =
        (image - mu * identity(phi.target())).operator_norm();
    if (defect > 1e-6 * std::max(1.0, std::abs(mu))) {
      fail("decompose: image of a scalar is not scalar");
    }
    out.worst_scalar_defect = std::max(out.worst_scalar_defect, defect);
    out.grid.push_back(lambda);
    out.f_samples.push_back(mu);
  }
  if (std::abs(out.f_samples.front()) > 1e-6 ||
      std::abs(out.f_samples.back() - 1.0) > 1e-6) {
    fail("decompose: map does not preserve the effect interval endpoints");
  }

  Rng root(seed);
  for (int s = 0; s < probes; ++s) {
    Rng rng = root.substream(static_cast<std::uint64_t>(s));
    const Element p = random_projection(phi.source(), rng);
    const Element q = phi.apply(p, tol);
    out.worst_projection_defect =
        std::max(out.worst_projection_defect, projection_defect(q));
    out.tau_samples.emplace_back(p, q);
  }

  out.residual = canonical_residual(phi, out.grid, out.f_samples, probes, seed, tol);
  return out;
}

double canonical_residual(const IsoPipeline& phi, std::span<const double> grid,
                          std::span<const double> f_samples, int probes,
                          std::uint64_t seed, const ToleranceProfile& tol) {
  if (grid.size() != f_samples.size() || grid.size() < 2) {
    fail("decompose: grid and samples must align");
  }
  Rng root(seed);
  double residual = 0.0;
  const auto tau = [&](const Element& e) { return phi.apply(e, tol); };
  const auto fmap = [&](double lambda) {
    return interpolate_samples(grid, f_samples, std::clamp(lambda, 0.0, 1.0));
  };
  for (int s = 0; s < probes; ++s) {
    Rng rng = root.substream(0x7e51d00ULL + static_cast<std::uint64_t>(s));
    const Element x = random_effect(phi.source(), rng);
    const Element direct = phi.apply(x, tol);
    const Element via_pair = transported_image(x, tau, fmap, phi.target(), tol);
    residual = std::max(residual, (direct - via_pair).operator_norm());
  }
  return residual;
}

namespace {

void certify_scalar_action(const IsoPipeline& phi, double lo, double hi,
                           const ToleranceProfile& tol) {
  const Element one = identity(phi.source());
  const double n = static_cast<double>(phi.target().total_dim());
  for (int i = 0; i <= 32; ++i) {
    const double lambda = lo + (hi - lo) * static_cast<double>(i) / 32.0;
    const Element image = phi.apply(lambda * one, tol);
    const double mu = image.trace().real() / n;
    if ((image - mu * identity(phi.target())).operator_norm() >
            1e-8 * std::max(1.0, std::abs(mu)) ||
        std::abs(mu - phi.scalar_action(lambda)) > 1e-9 * std::max(1.0, std::abs(mu))) {
      fail("extension: scalar action is not consistent with the full map");
    }
  }
}

}  // namespace

ExtensionReport extend_to_positive(const IsoPipeline& phi, int probes,
                                   std::uint64_t seed, const ToleranceProfile& tol) {
  if (phi.domain() == DomainTag::unit) {
    fail("extension: pipeline domain must cover the positive cone");
  }
  if (std::abs(phi.scalar_action(0.0)) > 1e-9) {
    fail("extension: map does not fix zero");
  }
  certify_scalar_action(phi, 0.0, 4.0, tol);

  ExtensionReport report;
  report.alphas = {1.0, 2.0, 3.0};
  const auto finv = [&](double mu) { return phi.scalar_action_inverse(mu); };
  const auto tau = [&](const Element& e) {
    return phi.apply(apply_scalar_map(e, finv, tol), tol);
  };

  Rng root(seed);
  for (int s = 0; s < probes; ++s) {
    Rng rng = root.substream(static_cast<std::uint64_t>(s));
    const Element x = random_effect(phi.source(), rng);
    std::optional<Element> reference;
    for (double alpha : report.alphas) {
      const Element pulled =
          apply_scalar_map(alpha * x, finv, tol);
      const Element value = (1.0 / alpha) * phi.apply(pulled, tol);
      const double low = std::max(0.0, -min_eigenvalue(value));
      const double high = std::max(0.0, max_eigenvalue(value) - 1.0);
      report.worst_class_defect = std::max(report.worst_class_defect,
                                           std::max(low, high));
      if (!reference) {
        reference = value;
        const Element canonical = transported_image(
            x, tau, [](double lambda) { return lambda; }, phi.target(), tol);
        report.worst_canonical_deviation =
            std::max(report.worst_canonical_deviation,
                     (value - canonical).operator_norm());
      } else {
        report.worst_alpha_deviation =
            std::max(report.worst_alpha_deviation,
                     (value - *reference).operator_norm());
      }
    }
  }
  return report;
}

ExtensionReport extend_to_selfadjoint(const IsoPipeline& phi, int probes,
                                      std::uint64_t seed,
                                      const ToleranceProfile& tol) {
  if (phi.domain() != DomainTag::real) {
    fail("extension: pipeline domain must be the real line");
  }
  certify_scalar_action(phi, -4.0, 4.0, tol);

  ExtensionReport report;
  report.alphas = {1.0, 2.0, 3.0};
  const auto finv = [&](double mu) { return phi.scalar_action_inverse(mu); };
  const auto normalized = [&](const Element& x) {
    return phi.apply(apply_scalar_map(x, finv, tol), tol);
  };
  const Element one_target = identity(phi.target());

  Rng root(seed);
  for (int s = 0; s < probes; ++s) {
    Rng rng = root.substream(static_cast<std::uint64_t>(s));
    const Element x = random_positive(phi.source(), rng);
    const Element fixed = normalized(x);
    for (double alpha : report.alphas) {
      const Element shifted =
          normalized(x - alpha * identity(phi.source())) + alpha * one_target;
      report.worst_class_defect =
          std::max(report.worst_class_defect,
                   std::max(0.0, -min_eigenvalue(shifted)));
      report.worst_alpha_deviation =
          std::max(report.worst_alpha_deviation,
                   (shifted - fixed).operator_norm());
    }

    const Element y = random_hermitian(phi.source(), rng);
    const Element direct = phi.apply(y, tol);
    const Element canonical = transported_image(
        y, normalized, [&](double lambda) { return phi.scalar_action(lambda); },
        phi.target(), tol);
    report.worst_canonical_deviation = std::max(
        report.worst_canonical_deviation, (direct - canonical).operator_norm());
  }
  return report;
}

OrthoVerdict is_ortho_iso(const IsoPipeline& phi, int trials, std::uint64_t seed,
                          const ToleranceProfile& tol) {
  const Algebra& algebra = phi.source();
  const Element zero = Element::zero(algebra);
  const auto images_orthogonal = [&](const Element& a, const Element& b) {
    return orthogonal(phi.apply(a, tol), phi.apply(b, tol), tol);
  };

  OrthoVerdict verdict;
  if (!images_orthogonal(zero, zero)) {
    verdict.ortho = false;
    verdict.witness = std::make_pair(zero, zero);
    verdict.witness_was_orthogonal = true;
    return verdict;
  }

  const auto sample = [&](Rng& rng) {
    switch (phi.domain()) {
      case DomainTag::unit: return random_effect(algebra, rng);
      case DomainTag::positive: return random_positive(algebra, rng);
      case DomainTag::real: return random_hermitian(algebra, rng);
    }
    return random_hermitian(algebra, rng);
  };

  Rng root(seed);
  for (int t = 0; t < trials; ++t) {
    Rng rng = root.substream(static_cast<std::uint64_t>(t));

    auto [a, b] = random_orthogonal_pair(algebra, rng);
    if (phi.domain() != DomainTag::real) {
      a = pos_neg_parts(a, tol).first;
      b = pos_neg_parts(b, tol).first;
      if (phi.domain() == DomainTag::unit) {
        a = (1.0 / std::max(1.0, a.operator_norm())) * a;
        b = (1.0 / std::max(1.0, b.operator_norm())) * b;
      }
    }
    if (!images_orthogonal(a, b)) {
      verdict.ortho = false;
      verdict.witness = std::make_pair(a, b);
      verdict.witness_was_orthogonal = true;
      return verdict;
    }
    if (!images_orthogonal(zero, a)) {
      verdict.ortho = false;
      verdict.witness = std::make_pair(zero, a);
      verdict.witness_was_orthogonal = true;
      return verdict;
    }

    const Element x = sample(rng);
    const Element y = sample(rng);
    if (!orthogonal(x, y, tol) && images_orthogonal(x, y)) {
      verdict.ortho = false;
      verdict.witness = std::make_pair(x, y);
      verdict.witness_was_orthogonal = false;
      return verdict;
    }
  }
  return verdict;
}

namespace {

Eigen::VectorXcd principal_vector(const Matrix& q) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(q);
  return solver.eigenvectors().col(q.rows() - 1);
}

Matrix basis_projection(int n, int i) {
  Matrix p = Matrix::Zero(n, n);
  p(i, i) = 1.0;
  return p;
}

Matrix vector_projection(const Eigen::VectorXcd& v) {
  return v * v.adjoint() / v.squaredNorm();
}

}  // namespace

JordanSpec wigner_reconstruct(int n, const ProjectionOracle& tau, int verify_probes,
                              std::uint64_t seed, const ToleranceProfile& tol) {
  if (n < 3) fail("wigner: requires matrix dimension n >= 3");

  std::vector<Matrix> images;
  images.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    Matrix q = tau(basis_projection(n, j));
    if ((q - q.adjoint()).operatorNorm() > 1e-8 ||
        (q * q - q).operatorNorm() > 1e-8 || std::abs(q.trace().real() - 1.0) > 1e-8) {
      fail("wigner: oracle image is not a rank-one projection");
    }
    images.push_back(std::move(q));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if ((images[static_cast<std::size_t>(i)] * images[static_cast<std::size_t>(j)])
              .operatorNorm() > 1e-8) {
        fail("wigner: oracle does not preserve orthogonality");
      }
    }
  }

  std::vector<Eigen::VectorXcd> frame;
  frame.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    frame.push_back(principal_vector(images[static_cast<std::size_t>(j)]));
  }

  // Relative phases from the images of the projections onto e_0 + e_j.
  for (int j = 1; j < n; ++j) {
    Eigen::VectorXcd probe = Eigen::VectorXcd::Zero(n);
    probe(0) = 1.0;
    probe(j) = 1.0;
    const Eigen::VectorXcd g = principal_vector(tau(vector_projection(probe)));
    const Complex alpha = frame[0].dot(g);
    const Complex beta = frame[static_cast<std::size_t>(j)].dot(g);
    if (std::abs(alpha) < 0.2 || std::abs(beta) < 0.2) {
      fail("wigner: oracle inconsistent on superposition probes");
    }
    Complex c = std::conj(alpha / beta);
    c /= std::abs(c);
    frame[static_cast<std::size_t>(j)] *= c;
  }

  // The image of the projection onto e_0 + i e_1 separates the linear branch
  // (ratio +i) from the conjugate-linear one (ratio -i).
  Eigen::VectorXcd complex_probe = Eigen::VectorXcd::Zero(n);
  complex_probe(0) = 1.0;
  complex_probe(1) = Complex(0.0, 1.0);
  const Eigen::VectorXcd h = principal_vector(tau(vector_projection(complex_probe)));
  const Complex ratio = frame[1].dot(h) / frame[0].dot(h);
  const bool transposed = ratio.imag() < 0.0;

  Matrix u(n, n);
  for (int j = 0; j < n; ++j) u.col(j) = frame[static_cast<std::size_t>(j)];
  Eigen::Index max_row = 0;
  u.col(0).cwiseAbs().maxCoeff(&max_row);
  Complex phase = u(max_row, 0);
  phase /= std::abs(phase);
  u *= std::conj(phase);
  if ((u * u.adjoint() - Matrix::Identity(n, n)).operatorNorm() > 1e-8) {
    fail("wigner: reconstructed frame is not unitary");
  }

  Rng rng(seed);
  double residual = 0.0;
  for (int s = 0; s < verify_probes; ++s) {
    Eigen::VectorXcd z(n);
    for (int i = 0; i < n; ++i) z(i) = Complex(rng.normal(), rng.normal());
    const Matrix p = vector_projection(z);
    const Matrix mapped = transposed ? Matrix(u * p.transpose() * u.adjoint())
                                     : Matrix(u * p * u.adjoint());
    residual = std::max(residual, (tau(p) - mapped).operatorNorm());
  }
  if (residual > 1e-8) fail("wigner: verification residual exceeded 1e-8");

  return JordanSpec(Algebra({n}), {0}, {u}, {transposed}, tol);
}

double unitary_phase_distance(const Matrix& a, const Matrix& b) {
  const Complex overlap = (a.adjoint() * b).trace();
  if (std::abs(overlap) < 1e-12) return (a - b).norm();
  const Complex phase = overlap / std::abs(overlap);
  return (a * phase - b).norm();
}

OrthoFactorization ortho_iso_factorize(const IsoPipeline& phi, int probes,
                                       std::uint64_t seed,
                                       const ToleranceProfile& tol) {
  if (!phi.source().is_factor() || !phi.target().is_factor()) {
    fail("ortho factorization: source and target must be factors");
  }
  const int n = phi.source().block_dim(0);
  if (n == 2) {
    fail("ortho factorization: dimension-two factors are excluded");
  }
  if (n < 3 || phi.target().block_dim(0) != n) {
    fail("ortho factorization: requires matching factor dimension n >= 3");
  }

  OrthoFactorization out;
  const OrthoVerdict verdict = is_ortho_iso(phi, 32, seed ^ 0x0112358dULL, tol);
  if (!verdict.ortho) {
    out.refused = true;
    out.refusal_reason = "map does not preserve orthogonality in both directions";
    out.ortho_witness = verdict.witness;
    return out;
  }

  double lo = 0.0, hi = 1.0;
  if (phi.domain() == DomainTag::positive) hi = 4.0;
  if (phi.domain() == DomainTag::real) {
    lo = -4.0;
    hi = 4.0;
  }
  certify_scalar_action(phi, lo, hi, tol);
  const int divisions = 1024;
  for (int i = 0; i <= divisions; ++i) {
    const double lambda = lo + (hi - lo) * static_cast<double>(i) / divisions;
    out.grid.push_back(lambda);
    out.f_samples.push_back(phi.scalar_action(lambda));
  }

  // tau(p) = phi(f^{-1}(1) p) lands on projections once the scalar part is
  // normalized away; the oracle hands single-block matrices to the frame
  // reconstruction.
  const double c1 = phi.scalar_action_inverse(1.0);
  const auto oracle = [&](const Matrix& p) {
    const Element pe(phi.source(), {Matrix(c1 * p)});
    return phi.apply(pe, tol).block(0);
  };
  out.psi = wigner_reconstruct(n, oracle, std::max(32, probes), seed ^ 0x3169e2ULL, tol);

  Rng root(seed);
  for (int s = 0; s < probes; ++s) {
    Rng rng = root.substream(static_cast<std::uint64_t>(s));
    Element x = Element::zero(phi.source());
    switch (phi.domain()) {
      case DomainTag::unit: x = random_effect(phi.source(), rng); break;
      case DomainTag::positive: x = random_positive(phi.source(), rng); break;
      case DomainTag::real: x = random_hermitian(phi.source(), rng); break;
    }
    const Element direct = phi.apply(x, tol);
    const Element mapped = apply_scalar_map(
        x, [&](double lambda) { return phi.scalar_action(lambda); }, tol);
    const Element factored = apply_jordan(*out.psi, mapped);
    out.residual = std::max(out.residual, (direct - factored).operator_norm());

    if (phi.domain() == DomainTag::real) {
      const Element y = random_hermitian(phi.source(), rng);
      const auto [y_pos, y_neg] = pos_neg_parts(y, tol);
      const auto [img_pos, img_neg] = pos_neg_parts(phi.apply(y, tol), tol);
      out.pos_neg_deviation =
          std::max(out.pos_neg_deviation,
                   (img_pos - phi.apply(y_pos, tol)).operator_norm());
      out.pos_neg_deviation =
          std::max(out.pos_neg_deviation,
                   (img_neg - (-(phi.apply(-(y_neg), tol)))).operator_norm());
    }
  }
  return out;
}

MonotoneBijection random_monotone_bijection(DomainTag domain, int interior_knots,
                                            Rng& rng, bool fix_zero) {
  const auto sorted_samples = [&](double lo, double hi, int count, double min_gap) {
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) xs.push_back(rng.uniform(lo, hi));
    std::sort(xs.begin(), xs.end());
    std::vector<double> spaced;
    for (double v : xs) {
      if (spaced.empty() || v - spaced.back() >= min_gap) spaced.push_back(v);
    }
    return spaced;
  };

  std::vector<MonotoneBijection::Knot> knots;
  switch (domain) {
    case DomainTag::unit: {
      auto xs = sorted_samples(0.02, 0.98, interior_knots, 1e-3);
      auto ys = sorted_samples(0.02, 0.98, interior_knots, 1e-3);
      const std::size_t m = std::min(xs.size(), ys.size());
      knots.push_back({0.0, 0.0});
      for (std::size_t i = 0; i < m; ++i) knots.push_back({xs[i], ys[i]});
      knots.push_back({1.0, 1.0});
      break;
    }
    case DomainTag::positive: {
      auto xs = sorted_samples(0.05, 4.0, interior_knots, 1e-3);
      auto ys = sorted_samples(0.05, 4.0, interior_knots, 1e-3);
      const std::size_t m = std::min(xs.size(), ys.size());
      knots.push_back({0.0, 0.0});
      for (std::size_t i = 0; i < m; ++i) knots.push_back({xs[i], ys[i]});
      if (knots.size() < 2) knots.push_back({1.0, rng.uniform(0.5, 2.0)});
      break;
    }
    case DomainTag::real: {
      if (fix_zero) {
        // build the two sides separately so monotonicity survives the pinned
        // zero knot
        auto xneg = sorted_samples(-4.0, -0.1, interior_knots / 2, 1e-3);
        auto yneg = sorted_samples(-4.0, -0.1, interior_knots / 2, 1e-3);
        auto xpos = sorted_samples(0.1, 4.0, interior_knots / 2, 1e-3);
        auto ypos = sorted_samples(0.1, 4.0, interior_knots / 2, 1e-3);
        const std::size_t mn = std::min(xneg.size(), yneg.size());
        const std::size_t mp = std::min(xpos.size(), ypos.size());
        for (std::size_t i = 0; i < mn; ++i) knots.push_back({xneg[i], yneg[i]});
        knots.push_back({0.0, 0.0});
        for (std::size_t i = 0; i < mp; ++i) knots.push_back({xpos[i], ypos[i]});
        if (knots.size() < 2) knots.push_back({1.0, rng.uniform(0.5, 2.0)});
      } else {
        auto xs = sorted_samples(-4.0, 4.0, interior_knots, 1e-3);
        auto ys = sorted_samples(-4.0, 4.0, interior_knots, 1e-3);
        const std::size_t m = std::min(xs.size(), ys.size());
        for (std::size_t i = 0; i < m; ++i) knots.push_back({xs[i], ys[i]});
        while (knots.size() < 2) {
          knots.clear();
          knots.push_back({-1.0, rng.uniform(-2.0, -0.5)});
          knots.push_back({1.0, rng.uniform(0.5, 2.0)});
        }
      }
      break;
    }
  }
  return MonotoneBijection(domain, std::move(knots));
}

JordanSpec random_jordan(const Algebra& algebra, Rng& rng) {
  const int m = algebra.block_count();
  // shuffle block slots only within groups of equal dimension so the target
  // signature equals the source signature
  std::map<int, std::vector<int>> groups;
  for (int k = 0; k < m; ++k) groups[algebra.block_dim(k)].push_back(k);
  std::vector<int> perm(static_cast<std::size_t>(m));
  for (auto& [dim, members] : groups) {
    std::vector<int> slots = members;
    for (std::size_t i = slots.size(); i-- > 1;) {
      const int j = rng.uniform_int(0, static_cast<int>(i));
      std::swap(slots[i], slots[static_cast<std::size_t>(j)]);
    }
    for (std::size_t i = 0; i < members.size(); ++i) {
      perm[static_cast<std::size_t>(members[i])] = slots[i];
    }
  }

  std::vector<Matrix> unitaries;
  std::vector<bool> flags;
  for (int k = 0; k < m; ++k) {
    unitaries.push_back(random_unitary_matrix(algebra.block_dim(k), rng));
    flags.push_back(rng.bernoulli());
  }
  return JordanSpec(algebra, std::move(perm), std::move(unitaries), std::move(flags));
}

IsoPipeline random_pipeline(const Algebra& algebra, DomainTag domain, int max_steps,
                            Rng& rng, bool calc_fix_zero) {
  const int count = rng.uniform_int(1, std::max(1, max_steps));
  std::vector<IsoPipeline::Step> steps;
  for (int s = 0; s < count; ++s) {
    if (rng.bernoulli()) {
      steps.emplace_back(random_monotone_bijection(domain, 18, rng, calc_fix_zero));
    } else {
      steps.emplace_back(random_jordan(algebra, rng));
    }
  }
  return IsoPipeline(algebra, std::move(steps), domain);
}

}  // namespace specord
