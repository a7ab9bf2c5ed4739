#include <specord/verify.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

namespace specord {

namespace {

struct CheckContext {
  std::vector<Signature> dims;
  int trials = 0;
  std::uint64_t seed = 0;

  const Signature& pick(int trial) const {
    return dims[static_cast<std::size_t>(trial) % dims.size()];
  }
  Rng stream(int trial) const {
    return Rng(seed).substream(static_cast<std::uint64_t>(trial));
  }
};

// Collects failures with the first failing payload as the witness.
struct Accumulator {
  int failures = 0;
  double worst = 0.0;
  nlohmann::json witness;

  void observe(double deviation, double limit, const nlohmann::json& payload = {}) {
    worst = std::max(worst, deviation);
    if (deviation > limit) record(payload);
  }
  void require(bool ok, const nlohmann::json& payload = {}) {
    if (!ok) {
      worst = std::max(worst, 1.0);
      record(payload);
    }
  }
  void record(const nlohmann::json& payload) {
    ++failures;
    if (witness.is_null() && !payload.is_null()) witness = payload;
  }
};

nlohmann::json pair_payload(const char* what, const Element& a, const Element& b) {
  return {{"what", what}, {"first", element_to_json(a)}, {"second", element_to_json(b)}};
}

double family_distance(const SpectralFamily& a, const SpectralFamily& b) {
  if (!(a.algebra() == b.algebra()) || a.size() != b.size()) return 1.0;
  double dev = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dev = std::max(dev, (a.breakpoints()[i].projection - b.breakpoints()[i].projection)
                            .operator_norm());
  }
  return dev;
}

std::vector<Signature> filtered(const std::vector<Signature>& dims,
                                const std::function<bool(const Signature&)>& keep,
                                std::vector<Signature> fallback) {
  std::vector<Signature> out;
  for (const Signature& s : dims) {
    if (keep(s)) out.push_back(s);
  }
  return out.empty() ? fallback : out;
}

bool is_factor_sig(const Signature& s) { return s.size() == 1; }
bool is_wigner_sig(const Signature& s) { return s.size() == 1 && s.front() >= 3; }
bool is_abelian_sig(const Signature& s) {
  return std::all_of(s.begin(), s.end(), [](int n) { return n == 1; });
}
bool has_proper_projection(const Signature& s) {
  int total = 0;
  for (int n : s) total += n;
  return total >= 2;
}

Element element_from_diag(const Algebra& algebra, const std::vector<double>& values) {
  std::vector<Matrix> blocks;
  std::size_t at = 0;
  for (int k = 0; k < algebra.block_count(); ++k) {
    const int n = algebra.block_dim(k);
    Matrix b = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) b(i, i) = values.at(at++);
    blocks.push_back(std::move(b));
  }
  return Element(algebra, std::move(blocks));
}

// ---------------------------------------------------------------------------
// order basics: scale/shift equivalence, projections, coarsening into the
// Loewner order, commuting equivalence, and the frozen counterexample showing
// a Loewner-comparable pair that is not spectrally comparable.

void loewner_not_spectral_fixture(Accumulator& acc) {
  const Algebra m2({2});
  const Element x = element_from_diag(m2, {1.5, 0.0});
  Matrix yb(2, 2);
  yb << 2.0, 1.0, 1.0, 2.0;
  const Element y(m2, {yb});

  acc.require(loewner_leq(x, y), pair_payload("fixture loewner", x, y));
  acc.require(!spectral_leq(x, y), pair_payload("fixture spectral", x, y));

  const SpectralFamily fx = family_of(x);
  const SpectralFamily fy = family_of(y);
  const SpectralFamily fams[] = {fx, fy};
  double gap = 0.0;
  for (double lambda : merged_breakpoints(fams)) {
    const Element ey = fy.evaluate(lambda);
    const Element ex = fx.evaluate(lambda);
    gap = std::max(gap, (ey * ex - ey).operator_norm());
  }
  acc.require(gap >= 1e-3, pair_payload("fixture gap", x, y));
}

CheckReport check_basic_properties(const CheckContext& ctx) {
  Accumulator acc;
  loewner_not_spectral_fixture(acc);
  for (int t = 0; t < ctx.trials; ++t) {
    const Algebra algebra(ctx.pick(t));
    Rng rng = ctx.stream(t);
    const Element x = random_hermitian(algebra, rng);
    const Element w = random_hermitian(algebra, rng);
    const Element y = spectral_sup(x, w);
    const Element one = identity(algebra);
    const double alpha = rng.uniform(0.1, 3.0);
    const double beta = rng.uniform(-2.0, 2.0);

    // comparable by construction, and stable under affine reparametrization
    acc.require(spectral_leq(x, y), pair_payload("lub", x, y));
    acc.require(spectral_leq(alpha * x + beta * one, alpha * y + beta * one),
                pair_payload("affine comparable", x, y));
    acc.require(spectral_leq(x, w) ==
                    spectral_leq(alpha * x + beta * one, alpha * w + beta * one),
                pair_payload("affine equivalence", x, w));

    // spectral comparability refines Loewner comparability
    acc.require(loewner_leq(x, y), pair_payload("coarsening", x, y));

    // the orders agree on projections
    const Element p = random_projection(algebra, rng);
    const Element q = random_projection(algebra, rng);
    acc.require(spectral_leq(p, q) == proj_leq(p, q), pair_payload("projections", p, q));

    // and on commuting pairs
    Rng urng = rng.substream(17);
    const Element u = random_unitary(algebra, urng);
    std::vector<double> d1, d2;
    for (int i = 0; i < algebra.total_dim(); ++i) {
      d1.push_back(rng.normal());
      d2.push_back(rng.normal());
    }
    const Element a = (u * element_from_diag(algebra, d1) * u.adjoint()).hermitized();
    const Element b = (u * element_from_diag(algebra, d2) * u.adjoint()).hermitized();
    acc.require(spectral_leq(a, b) == loewner_leq(a, b),
                pair_payload("commuting", a, b));
  }
  return {"basic_properties", ctx.dims, ctx.seed, ctx.trials, acc.failures, acc.worst,
          acc.witness, 0.0};
}

CheckReport check_rescale_translate(const CheckContext& ctx) {
  Accumulator acc;
  for (int t = 0; t < ctx.trials; ++t) {
    const Algebra algebra(ctx.pick(t));
    Rng rng = ctx.stream(t);
    const Element x = random_hermitian(algebra, rng);
    const double alpha = rng.uniform(0.2, 3.0);
    const double beta = rng.uniform(-2.0, 2.0);
    const SpectralFamily f = family_of(x);

    const SpectralFamily scaled = f.rescaled(alpha);
    acc.require(families_equal(family_of(alpha * x), scaled),
                pair_payload("rescale family", x, alpha * x));
    acc.observe(family_distance(family_of(alpha * x), scaled), 1e-9);

    const Element shifted_x = x + beta * identity(algebra);
    const SpectralFamily shifted = f.translated(beta);
    acc.require(families_equal(family_of(shifted_x), shifted),
                pair_payload("translate family", x, shifted_x));
    acc.observe(family_distance(family_of(shifted_x), shifted), 1e-9);

    const double scale = std::max(1.0, x.operator_norm());
    acc.observe((scaled.reconstruct() - alpha * x).operator_norm(), 1e-8 * scale);
    acc.observe((shifted.reconstruct() - shifted_x).operator_norm(), 1e-8 * scale);
  }
  return {"rescale_translate", ctx.dims, ctx.seed, ctx.trials, acc.failures, acc.worst,
          acc.witness, 0.0};
}

CheckReport check_corner_families(const CheckContext& ctx) {
  Accumulator acc;
  for (int t = 0; t < ctx.trials; ++t) {
    const Algebra algebra(ctx.pick(t));
    Rng rng = ctx.stream(t);
    const Element e =
        (t % 5 == 0) ? identity(algebra) : random_projection(algebra, rng);
    Element x = (e * random_hermitian(algebra, rng) * e).hermitized();
    if (t % 7 == 0) x = Element::zero(algebra);

    const auto result = corner_family(family_of(x), e);
    acc.observe(result.residue_deviation, 1e-9, pair_payload("residue", e, x));

    const SpectralFamily direct = family_of(corner(e, x));
    acc.require(families_equal(result.family, direct), pair_payload("corner", e, x));
    acc.observe((result.family.reconstruct() - corner(e, x)).operator_norm(), 1e-7,
                pair_payload("corner reconstruct", e, x));
  }
  return {"corner_families", ctx.dims, ctx.seed, ctx.trials, acc.failures, acc.worst,
          acc.witness, 0.0};
}

CheckReport check_sup_inf_formulas(const CheckContext& ctx) {
  Accumulator acc;
  for (int t = 0; t < ctx.trials; ++t) {
    const Algebra algebra(ctx.pick(t));
    Rng rng = ctx.stream(t);
    std::vector<Element> xs;
    const int count = rng.uniform_int(2, 4);
    for (int i = 0; i < count; ++i) xs.push_back(random_hermitian(algebra, rng));

    const Element sup = spectral_sup(xs);
    const Element inf = spectral_inf(xs);
    for (const Element& x : xs) {
      acc.require(spectral_leq(x, sup), pair_payload("sup bound", x, sup));
      acc.require(spectral_leq(inf, x), pair_payload("inf bound", inf, x));
    }

    // least upper bound against a larger construction
    std::vector<Element> extended = xs;
    extended.push_back(random_hermitian(algebra, rng));
    acc.require(spectral_leq(sup, spectral_sup(extended)),
                pair_payload("lub", sup, spectral_sup(extended)));
    acc.require(spectral_leq(spectral_inf(extended), inf),
                pair_payload("glb", inf, spectral_inf(extended)));

    // singleton and antisymmetry
    const Element singleton[] = {xs.front()};
    acc.observe((spectral_sup(singleton) - xs.front()).operator_norm(),
                1e-8 * std::max(1.0, xs.front().operator_norm()));
    std::vector<Element> reversed(xs.rbegin(), xs.rend());
    acc.observe((sup - spectral_sup(reversed)).operator_norm(), 1e-7);

    // right-regularization collapses onto the pointwise join
    std::vector<SpectralFamily> fams;
    for (const Element& x : xs) fams.push_back(family_of(x));
    acc.require(families_equal(inf_family(fams), inf_family_regularized(fams)),
                pair_payload("regularization", xs.front(), xs.back()));
  }
  return {"sup_inf_formulas", ctx.dims, ctx.seed, ctx.trials, acc.failures, acc.worst,
          acc.witness, 0.0};
}

CheckReport check_independence(const CheckContext& ctx) {
  Accumulator acc;
  for (int t = 0; t < ctx.trials; ++t) {
    const Algebra algebra(ctx.pick(t));
    Rng rng = ctx.stream(t);
    const Element e =
        (t % 4 == 0) ? identity(algebra) : random_projection(algebra, rng);
    std::vector<Element> xs;
    const int count = (t % 3 == 0) ? 1 : rng.uniform_int(2, 3);
    for (int i = 0; i < count; ++i) {
      xs.push_back((e * random_hermitian(algebra, rng) * e).hermitized());
    }
    const auto report = independence_check(e, xs);
    acc.observe(report.sup_deviation, 1e-7, pair_payload("sup", e, xs.front()));
    acc.observe(report.inf_deviation, 1e-7, pair_payload("inf", e, xs.front()));
  }
  return {"independence", ctx.dims, ctx.seed, ctx.trials, acc.failures, acc.worst,
          acc.witness, 0.0};
}

CheckReport check_sublattices(const CheckContext& ctx) {
  Accumulator acc;
  for (int t = 0; t < ctx.trials; ++t) {
    const Algebra algebra(ctx.pick(t));
    Rng rng = ctx.stream(t);
    const int count = rng.uniform_int(2, 4);
    std::vector<Element> xs;
    ElementClass cls = ElementClass::positive;
    switch (t % 3) {
      case 0:
        cls = ElementClass::positive;
        for (int i = 0; i < count; ++i) xs.push_back(random_positive(algebra, rng));
        break;
      case 1:
        cls = ElementClass::effect;
        for (int i = 0; i < count; ++i) xs.push_back(random_effect(algebra, rng));
        break;
      default:
        cls = ElementClass::projection;
        for (int i = 0; i < count; ++i) xs.push_back(random_projection(algebra, rng));
        break;
    }
    const auto report = sup_inf_closure_check(xs, cls);
    acc.require(report.closed, pair_payload("closure", xs.front(), xs.back()));
    acc.observe(report.worst_deviation, 1e-7);
  }
  return {"sublattices", ctx.dims, ctx.seed, ctx.trials, acc.failures, acc.worst,
          acc.witness, 0.0};
}

CheckReport check_sup_orthogonal(const CheckContext& ctx) {
  Accumulator acc;
  for (int t = 0; t < ctx.trials; ++t) {
    const Algebra algebra(ctx.pick(t));
    Rng rng = ctx.stream(t);
    auto [x, y] = random_orthogonal_pair(algebra, rng);
    if (t % 9 == 0) y = Element::zero(algebra);
    const auto cert = sup_orthogonal(x, y);
    acc.observe(cert.certificate_deviation, 1e-8, pair_payload("certificate", x, y));
  }
  return {"sup_orthogonal", ctx.dims, ctx.seed, ctx.trials, acc.failures, acc.worst,
          acc.witness, 0.0};
}

CheckReport check_sup_scaled(const CheckContext& ctx) {
  Accumulator acc;

  // golden instance in the two-by-two factor
  {
    const Algebra m2({2});
    const Element p = element_from_diag(m2, {1.0, 0.0});
    Matrix qb(2, 2);
    qb << 0.5, 0.5, 0.5, 0.5;
    const Element q(m2, {qb});
    const auto cert = sup_scaled_projections(0.5, p, 1.0, q);
    Matrix expected(2, 2);
    expected << 0.75, 0.25, 0.25, 0.75;
    acc.observe((cert.value - Element(m2, {expected})).operator_norm(), 1e-12,
                pair_payload("golden", p, q));
  }

  for (int t = 0; t < ctx.trials; ++t) {
    const Algebra algebra(ctx.pick(t));
    Rng rng = ctx.stream(t);
    const Element p = random_projection(algebra, rng);
    const Element q = random_projection(algebra, rng);
    double alpha = rng.uniform(0.0, 2.0);
    double beta = alpha + rng.uniform(0.0, 2.0);
    if (t % 7 == 0) alpha = 0.0;
    if (t % 11 == 0) beta = alpha;
    const auto cert = sup_scaled_projections(alpha, p, beta, q);
    acc.observe(cert.certificate_deviation, 1e-8, pair_payload("certificate", p, q));
  }
  return {"sup_scaled", ctx.dims, ctx.seed, ctx.trials, acc.failures, acc.worst,
          acc.witness, 0.0};
}

CheckReport check_atomic_char(const CheckContext& ctx) {
  Accumulator acc;
  for (int t = 0; t < ctx.trials; ++t) {
    const Algebra algebra(ctx.pick(t));
    Rng rng = ctx.stream(t);
    Element x = Element::zero(algebra);
    const int mode = (algebra.total_dim() == 1) ? 0 : t % 4;
    switch (mode) {
      case 0: {  // scalar multiple of an atom
        Element p = random_projection(algebra, rng);
        const auto pairs = eig(p);
        for (const auto& sp : pairs) {
          if (sp.eigenvalue > 0.5) {
            // peel one rank from the range to get an atom
            const auto cb = corner_basis(sp.projector);
            for (std::size_t k = 0; k < cb.bases.size(); ++k) {
              if (cb.ranks[k] > 0) {
                std::vector<Matrix> blocks;
                for (int j = 0; j < algebra.block_count(); ++j) {
                  const int n = algebra.block_dim(j);
                  blocks.push_back(
                      static_cast<std::size_t>(j) == k
                          ? Matrix(cb.bases[k].col(0) * cb.bases[k].col(0).adjoint())
                          : Matrix(Matrix::Zero(n, n)));
                }
                x = rng.uniform(0.1, 1.0) * Element(algebra, std::move(blocks));
                break;
              }
            }
            break;
          }
        }
        break;
      }
      case 1: {  // scalar multiple of the identity (non-atomic projection)
        x = rng.uniform(0.1, 1.0) * identity(algebra);
        break;
      }
      case 2: {  // generic effect
        x = random_effect(algebra, rng);
        break;
      }
      default: {  // scaled non-atomic projection when available
        Element p = random_projection(algebra, rng);
        if (projection_rank(p) < 2) p = identity(algebra);
        x = rng.uniform(0.1, 1.0) * p;
        break;
      }
    }
    if (x.operator_norm() < 1e-9) continue;

    const auto result = chain_below(x);

    // independent rank-and-spectrum oracle on the raw per-block eigenvalues
    std::vector<double> raw;
    for (int k = 0; k < x.block_count(); ++k) {
      Eigen::SelfAdjointEigenSolver<Matrix> solver(x.block(k), Eigen::EigenvaluesOnly);
      for (int i = 0; i < solver.eigenvalues().size(); ++i) {
        raw.push_back(solver.eigenvalues()(i));
      }
    }
    int support = 0;
    double level = 0.0;
    bool single_level = true;
    for (double v : raw) {
      if (std::abs(v) <= 1e-7) continue;
      ++support;
      if (level == 0.0) {
        level = v;
      } else if (std::abs(v - level) > 1e-7) {
        single_level = false;
      }
    }
    const bool oracle_atom = single_level && support == 1 && level > 0.0;
    acc.require(result.scalar_atom == oracle_atom,
                {{"what", "classification"}, {"element", element_to_json(x)}});

    if (result.scalar_atom) {
      acc.observe(std::abs(result.lambda - level), 1e-7);
    } else {
      acc.require(result.witness.has_value());
      if (result.witness) {
        const auto& [y, z] = *result.witness;
        acc.require(spectral_leq(y, x) && spectral_leq(z, x),
                    pair_payload("witness below", y, z));
        acc.require(!spectral_leq(y, z) && !spectral_leq(z, y),
                    pair_payload("witness incomparable", y, z));
        if (acc.witness.is_null()) acc.witness = pair_payload("witness", y, z);
      }
    }
  }
  return {"atomic_char", ctx.dims, ctx.seed, ctx.trials, acc.failures, acc.worst,
          acc.witness, 0.0};
}

CheckReport check_central_distributive(const CheckContext& ctx) {
  Accumulator acc;
  for (int t = 0; t < ctx.trials; ++t) {
    const Algebra algebra(ctx.pick(t));
    Rng rng = ctx.stream(t);
    if (t % 2 == 0) {
      const Element z = random_central(algebra, rng);
      const auto result = is_spectrally_distributive(z, 4, rng.next_u64());
      acc.require(result.distributive, {{"what", "central"}, {"z", element_to_json(z)}});
      acc.observe(result.worst_deviation, 1e-7);
    } else {
      const Element z = random_hermitian(algebra, rng);
      if (is_central(z)) continue;  // abelian signatures have no non-central side
      const auto result = is_spectrally_distributive(z, 4, rng.next_u64());
      acc.require(!result.distributive && result.witness.has_value(),
                  {{"what", "witness missing"}, {"z", element_to_json(z)}});
      if (result.witness) {
        acc.require(result.worst_deviation >= 1e-6,
                    pair_payload("violation too small", result.witness->first,
                                 result.witness->second));
        if (acc.witness.is_null()) {
          acc.witness = pair_payload("witness", result.witness->first,
                                     result.witness->second);
        }
      }
    }
  }
  return {"central_distributive", ctx.dims, ctx.seed, ctx.trials, acc.failures,
          acc.worst, acc.witness, 0.0};
}

CheckReport check_central_projections(const CheckContext& ctx) {
  Accumulator acc;
  for (int t = 0; t < ctx.trials; ++t) {
    const Algebra algebra(ctx.pick(t));
    Rng rng = ctx.stream(t);
    if (t % 2 == 0) {
      const Element z = random_central_projection(algebra, rng);
      for (int i = 0; i < 4; ++i) {
        const Element p = random_projection(algebra, rng);
        const Element q = random_projection(algebra, rng);
        const Element lhs = meet(z, join(p, q));
        const Element rhs = join(meet(z, p), meet(z, q));
        acc.observe((lhs - rhs).operator_norm(), 1e-8, pair_payload("law", p, q));
      }
    } else {
      const Element z = random_projection(algebra, rng);
      if (is_central(z)) continue;
      const auto witness = central_proj_witness(z);
      acc.require(witness.has_value(), {{"what", "no witness"}, {"z", element_to_json(z)}});
      if (witness) {
        const Element recombined =
            join(meet(z, *witness), meet(z, complement(*witness)));
        const double violation = (z - recombined).operator_norm();
        acc.require(violation >= 0.5, pair_payload("violation", z, *witness));
        if (acc.witness.is_null()) acc.witness = pair_payload("witness", z, *witness);
      }
    }
  }
  return {"central_projections", ctx.dims, ctx.seed, ctx.trials, acc.failures,
          acc.worst, acc.witness, 0.0};
}

CheckReport check_sup_of_infima(const CheckContext& ctx) {
  Accumulator acc;
  for (int t = 0; t < ctx.trials; ++t) {
    const Algebra algebra(ctx.pick(t));
    Rng rng = ctx.stream(t);
    const int n = algebra.total_dim();
    const int steps = rng.uniform_int(2, 4);

    // increasing 0/1 diagonal chains
    const auto grow_chain = [&](std::vector<double> start) {
      std::vector<std::vector<double>> chain{start};
      for (int s = 1; s < steps; ++s) {
        std::vector<double> next = chain.back();
        for (int i = 0; i < n; ++i) {
          if (next[static_cast<std::size_t>(i)] == 0.0 && rng.bernoulli(0.4)) {
            next[static_cast<std::size_t>(i)] = 1.0;
          }
        }
        chain.push_back(std::move(next));
      }
      return chain;
    };
    std::vector<double> p0(static_cast<std::size_t>(n), 0.0);
    std::vector<double> q0(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
      if (rng.bernoulli(0.4)) p0[static_cast<std::size_t>(i)] = 1.0;
      if (rng.bernoulli(0.4)) q0[static_cast<std::size_t>(i)] = 1.0;
    }
    const auto ps = grow_chain(p0);
    const auto qs = grow_chain(q0);

    std::vector<Element> joins;
    for (int s = 0; s < steps; ++s) {
      joins.push_back(join(element_from_diag(algebra, ps[static_cast<std::size_t>(s)]),
                           element_from_diag(algebra, qs[static_cast<std::size_t>(s)])));
    }
    const Element lhs = meet_all(joins);
    const Element rhs = join(element_from_diag(algebra, ps.front()),
                             element_from_diag(algebra, qs.front()));
    acc.observe((lhs - rhs).operator_norm(), 1e-12,
                pair_payload("chain identity", lhs, rhs));
  }
  return {"sup_of_infima", ctx.dims, ctx.seed, ctx.trials, acc.failures, acc.worst,
          acc.witness, 0.0};
}

CheckReport check_calculus(const CheckContext& ctx) {
  Accumulator acc;
  for (int t = 0; t < ctx.trials; ++t) {
    const Algebra algebra(ctx.pick(t));
    Rng rng = ctx.stream(t);
    const DomainTag domain =
        (t % 3 == 0) ? DomainTag::unit : (t % 3 == 1) ? DomainTag::positive : DomainTag::real;
    const MonotoneBijection f = random_monotone_bijection(domain, 18, rng);
    Element x = Element::zero(algebra);
    switch (domain) {
      case DomainTag::unit: x = random_effect(algebra, rng); break;
      case DomainTag::positive: x = random_positive(algebra, rng); break;
      case DomainTag::real: x = random_hermitian(algebra, rng); break;
    }
    const Element y = apply_calc(f, x);

    // the image family runs through the source chain of cumulative
    // projections, with jump values relabelled by f
    const SpectralFamily fx = family_of(x);
    const SpectralFamily fy = family_of(y);
    acc.observe(chain_alignment_defect(fy, fx), 1e-8, pair_payload("family law", x, y));
    if (fy.size() == fx.size()) {
      double y_scale = 1.0;
      for (const Breakpoint& bp : fy.breakpoints()) {
        y_scale = std::max(y_scale, std::abs(bp.lambda));
      }
      for (std::size_t i = 0; i < fy.size(); ++i) {
        acc.observe(std::abs(fy.breakpoints()[i].lambda -
                             f(domain_clamp(f.domain(), fx.breakpoints()[i].lambda))),
                    1e-7 * y_scale, pair_payload("jump values", x, y));
      }
    } else {
      acc.require(fy.size() < fx.size(), pair_payload("cluster count", x, y));
    }

    // a pure calculus map preserves orthogonality exactly when it fixes zero
    const IsoPipeline pipeline(algebra, {IsoPipeline::Step(f)}, domain);
    const auto verdict = is_ortho_iso(pipeline, 4, rng.next_u64());
    acc.require(verdict.ortho == f.fixes_zero(1e-9),
                {{"what", "orthogonality"}, {"fixes_zero", f.fixes_zero(1e-9)}});
  }
  return {"calculus", ctx.dims, ctx.seed, ctx.trials, acc.failures, acc.worst,
          acc.witness, 0.0};
}

CheckReport check_theta_jordan(const CheckContext& ctx) {
  Accumulator acc;
  for (int t = 0; t < ctx.trials; ++t) {
    const Algebra algebra(ctx.pick(t));
    Rng rng = ctx.stream(t);
    const JordanSpec j = random_jordan(algebra, rng);
    const Element x = random_hermitian(algebra, rng);

    const Element direct = apply_jordan(j, x);
    acc.observe((theta(j, x) - direct).operator_norm(),
                1e-8 * std::max(1.0, x.operator_norm()),
                pair_payload("theta", x, direct));

    // family equivariance
    const SpectralFamily fx = family_of(x);
    std::vector<Breakpoint> transported;
    for (const Breakpoint& bp : fx.breakpoints()) {
      transported.push_back({bp.lambda, apply_jordan(j, bp.projection)});
    }
    acc.require(families_equal(family_of(direct),
                               SpectralFamily(j.target(), transported)),
                pair_payload("equivariance", x, direct));

    // squares and adjoints
    const Element g = random_hermitian(algebra, rng) +
                      Complex(0.0, 1.0) * random_hermitian(algebra, rng);
    const double scale = std::max(1.0, g.operator_norm());
    acc.observe((apply_jordan(j, g * g) - apply_jordan(j, g) * apply_jordan(j, g))
                    .operator_norm(),
                1e-9 * scale * scale);
    acc.observe((apply_jordan(j, g.adjoint()) - apply_jordan(j, g).adjoint())
                    .operator_norm(),
                1e-9 * scale);

    // order preservation and reflection
    const Element w = random_hermitian(algebra, rng);
    const Element upper = spectral_sup(x, w);
    acc.require(spectral_leq(theta(j, x), theta(j, upper)),
                pair_payload("order preserved", x, upper));
    acc.require(spectral_leq(x, w) == spectral_leq(theta(j, x), theta(j, w)),
                pair_payload("order reflected", x, w));
  }
  return {"theta_jordan", ctx.dims, ctx.seed, ctx.trials, acc.failures, acc.worst,
          acc.witness, 0.0};
}

CheckReport check_canonical_effects(const CheckContext& ctx) {
  Accumulator acc;
  for (int t = 0; t < ctx.trials; ++t) {
    const Algebra algebra(ctx.pick(t));
    Rng rng = ctx.stream(t);
    const IsoPipeline phi = random_pipeline(algebra, DomainTag::unit, 3, rng);
    const auto cd = canonical_decompose(phi, 12, rng.next_u64());

    const MonotoneBijection f_true = composed_calc(phi);
    double f_dev = 0.0;
    for (std::size_t i = 0; i < cd.grid.size(); ++i) {
      f_dev = std::max(f_dev, std::abs(cd.f_samples[i] - f_true(cd.grid[i])));
    }
    acc.observe(f_dev, 1e-6, {{"what", "scalar recovery"}});

    const auto j_true = composed_jordan(phi);
    double tau_dev = 0.0;
    for (const auto& [p, image] : cd.tau_samples) {
      const Element expected = j_true ? apply_jordan(*j_true, p) : p;
      tau_dev = std::max(tau_dev, (image - expected).operator_norm());
    }
    acc.observe(tau_dev, 1e-8, {{"what", "projection recovery"}});
    acc.observe(cd.worst_scalar_defect, 1e-8);
    acc.observe(cd.worst_projection_defect, 1e-8);

    if (t % 10 == 0) {
      // tampered scalar samples must surface in the residual
      std::vector<double> tampered = cd.f_samples;
      for (std::size_t i = tampered.size() / 4; i < 3 * tampered.size() / 4; ++i) {
        tampered[i] *= 0.5;
      }
      const double bad =
          canonical_residual(phi, cd.grid, tampered, 8, rng.next_u64());
      acc.require(bad > 1e-3, {{"what", "negative control"}, {"residual", bad}});
    }
  }
  return {"canonical_effects", ctx.dims, ctx.seed, ctx.trials, acc.failures, acc.worst,
          acc.witness, 0.0};
}

CheckReport check_canonical_positive(const CheckContext& ctx) {
  Accumulator acc;
  for (int t = 0; t < ctx.trials; ++t) {
    const Algebra algebra(ctx.pick(t));
    Rng rng = ctx.stream(t);
    const IsoPipeline phi = random_pipeline(algebra, DomainTag::positive, 3, rng);
    const auto report = extend_to_positive(phi, 6, rng.next_u64());
    acc.observe(report.worst_class_defect, 1e-8, {{"what", "effects escape"}});
    acc.observe(report.worst_alpha_deviation, 1e-7, {{"what", "alpha family"}});
    acc.observe(report.worst_canonical_deviation, 1e-7, {{"what", "canonical pair"}});
  }
  return {"canonical_positive", ctx.dims, ctx.seed, ctx.trials, acc.failures,
          acc.worst, acc.witness, 0.0};
}

CheckReport check_canonical_sa(const CheckContext& ctx) {
  Accumulator acc;
  for (int t = 0; t < ctx.trials; ++t) {
    const Algebra algebra(ctx.pick(t));
    Rng rng = ctx.stream(t);
    const IsoPipeline phi = random_pipeline(algebra, DomainTag::real, 3, rng);
    const auto report = extend_to_selfadjoint(phi, 6, rng.next_u64());
    acc.observe(report.worst_class_defect, 1e-8, {{"what", "positivity escape"}});
    acc.observe(report.worst_alpha_deviation, 1e-7, {{"what", "alpha family"}});
    acc.observe(report.worst_canonical_deviation, 1e-7, {{"what", "canonical pair"}});
  }
  return {"canonical_sa", ctx.dims, ctx.seed, ctx.trials, acc.failures, acc.worst,
          acc.witness, 0.0};
}

CheckReport check_ortho_factor(const CheckContext& ctx) {
  Accumulator acc;

  // a dimension-two factor is always rejected
  {
    bool rejected = false;
    try {
      ortho_iso_factorize(IsoPipeline::identity_on(Algebra({2}), DomainTag::unit), 4,
                          ctx.seed);
    } catch (const std::invalid_argument&) {
      rejected = true;
    }
    acc.require(rejected, {{"what", "dimension-two factor accepted"}});
  }

  for (int t = 0; t < ctx.trials; ++t) {
    const Algebra algebra(ctx.pick(t));
    Rng rng = ctx.stream(t);
    switch (t % 3) {
      case 0: {
        const IsoPipeline phi = random_pipeline(algebra, DomainTag::unit, 3, rng);
        const auto fact = ortho_iso_factorize(phi, 12, rng.next_u64());
        acc.require(!fact.refused, {{"what", "refused valid map"}});
        if (fact.refused) break;
        acc.observe(fact.residual, 1e-8, {{"what", "factorization residual"}});
        const auto j_true = composed_jordan(phi);
        const JordanSpec expected =
            j_true ? *j_true : JordanSpec::identity_on(algebra);
        acc.require(fact.psi->transposed() == expected.transposed(),
                    {{"what", "branch detection"}});
        acc.observe(unitary_phase_distance(fact.psi->unitaries()[0],
                                           expected.unitaries()[0]),
                    1e-6, {{"what", "frame recovery"}});
        break;
      }
      case 1: {
        const IsoPipeline phi =
            random_pipeline(algebra, DomainTag::real, 2, rng, /*calc_fix_zero=*/true);
        const auto fact = ortho_iso_factorize(phi, 8, rng.next_u64());
        acc.require(!fact.refused, {{"what", "refused zero-fixing map"}});
        if (fact.refused) break;
        acc.observe(fact.residual, 1e-8, {{"what", "factorization residual"}});
        acc.observe(fact.pos_neg_deviation, 1e-8, {{"what", "positive part transport"}});
        break;
      }
      default: {
        // shift a zero-fixing map so 0 is no longer fixed
        MonotoneBijection f = random_monotone_bijection(DomainTag::real, 10, rng);
        std::vector<MonotoneBijection::Knot> knots = f.knots();
        const double offset = 1.0 - f(0.0);
        for (auto& k : knots) k.second += offset;
        const MonotoneBijection g(DomainTag::real, std::move(knots));
        const IsoPipeline phi(algebra, {IsoPipeline::Step(g)}, DomainTag::real);
        const auto fact = ortho_iso_factorize(phi, 8, rng.next_u64());
        acc.require(fact.refused && fact.ortho_witness.has_value(),
                    {{"what", "orthogonality break not detected"}});
        if (fact.refused && fact.ortho_witness && acc.witness.is_null()) {
          acc.witness = pair_payload("witness", fact.ortho_witness->first,
                                     fact.ortho_witness->second);
        }
        break;
      }
    }
  }
  return {"ortho_factor", ctx.dims, ctx.seed, ctx.trials, acc.failures, acc.worst,
          acc.witness, 0.0};
}

CheckReport check_pos_neg_parts(const CheckContext& ctx) {
  Accumulator acc;
  for (int t = 0; t < ctx.trials; ++t) {
    const Algebra algebra(ctx.pick(t));
    Rng rng = ctx.stream(t);
    const Element x = random_hermitian(algebra, rng);
    const auto [pos, neg] = pos_neg_parts(x);
    const double scale = std::max(1.0, x.operator_norm());
    acc.observe((x - (pos - neg)).operator_norm(), 1e-9 * scale);
    acc.observe((pos * neg).operator_norm(), 1e-9 * scale * scale);
    acc.require(is_positive(pos) && is_positive(neg), pair_payload("parts", pos, neg));

    const IsoPipeline phi =
        random_pipeline(algebra, DomainTag::real, 2, rng, /*calc_fix_zero=*/true);
    const Element image = phi.apply(x);
    const auto [img_pos, img_neg] = pos_neg_parts(image);
    acc.observe((img_pos - phi.apply(pos)).operator_norm(), 1e-8 * scale,
                pair_payload("positive part", x, image));
    acc.observe((img_neg - (-(phi.apply(-neg)))).operator_norm(), 1e-8 * scale,
                pair_payload("negative part", x, image));
  }
  return {"pos_neg_parts", ctx.dims, ctx.seed, ctx.trials, acc.failures, acc.worst,
          acc.witness, 0.0};
}

CheckReport check_wigner(const CheckContext& ctx) {
  Accumulator acc;

  // oracle images must be rank-one projections
  {
    bool rejected = false;
    try {
      const auto broken = [](const Matrix& p) {
        return Matrix(0.5 * p + 0.5 * Matrix::Identity(p.rows(), p.cols()));
      };
      wigner_reconstruct(3, broken, 4, ctx.seed);
    } catch (const std::invalid_argument&) {
      rejected = true;
    }
    acc.require(rejected, {{"what", "broken oracle accepted"}});
  }

  for (int t = 0; t < ctx.trials; ++t) {
    const Algebra algebra(ctx.pick(t));
    const int n = algebra.block_dim(0);
    Rng rng = ctx.stream(t);
    Matrix hidden = random_unitary_matrix(n, rng);
    if (t % 3 == 2) hidden = Matrix::Identity(n, n);
    const bool hidden_transpose = (t % 3 == 1);
    const auto oracle = [&](const Matrix& p) {
      const Matrix base = hidden_transpose ? Matrix(p.transpose()) : p;
      return Matrix(hidden * base * hidden.adjoint());
    };
    try {
      const JordanSpec recovered = wigner_reconstruct(n, oracle, 24, rng.next_u64());
      acc.require(recovered.transposed()[0] == hidden_transpose,
                  {{"what", "branch detection"}, {"n", n}});
      acc.observe(unitary_phase_distance(recovered.unitaries()[0], hidden), 1e-8,
                  {{"what", "frame recovery"}, {"n", n}});
    } catch (const std::invalid_argument& e) {
      acc.require(false, {{"what", "reconstruction failed"}, {"error", e.what()}});
    }
  }
  return {"wigner", ctx.dims, ctx.seed, ctx.trials, acc.failures, acc.worst,
          acc.witness, 0.0};
}

using CheckFn = CheckReport (*)(const CheckContext&);

struct RegisteredCheck {
  const char* name;
  CheckFn fn;
  std::function<bool(const Signature&)> keep;
  std::vector<Signature> fallback;
};

const std::vector<RegisteredCheck>& registry() {
  static const std::vector<RegisteredCheck> checks = {
      {"basic_properties", check_basic_properties, nullptr, {}},
      {"rescale_translate", check_rescale_translate, nullptr, {}},
      {"corner_families", check_corner_families, has_proper_projection, {{3}}},
      {"sup_inf_formulas", check_sup_inf_formulas, nullptr, {}},
      {"independence", check_independence, has_proper_projection, {{3}}},
      {"sublattices", check_sublattices, nullptr, {}},
      {"sup_orthogonal", check_sup_orthogonal, nullptr, {}},
      {"sup_scaled", check_sup_scaled, nullptr, {}},
      {"atomic_char", check_atomic_char, nullptr, {}},
      {"central_distributive", check_central_distributive, nullptr, {}},
      {"central_projections", check_central_projections, has_proper_projection, {{3}}},
      {"sup_of_infima", check_sup_of_infima, is_abelian_sig, {{1, 1, 1, 1}}},
      {"calculus", check_calculus, nullptr, {}},
      {"theta_jordan", check_theta_jordan, nullptr, {}},
      {"canonical_effects", check_canonical_effects, is_factor_sig, {{3}, {4}}},
      {"canonical_positive", check_canonical_positive, is_factor_sig, {{3}, {4}}},
      {"canonical_sa", check_canonical_sa, is_factor_sig, {{3}, {4}}},
      {"ortho_factor", check_ortho_factor, is_wigner_sig, {{3}, {4}}},
      {"pos_neg_parts", check_pos_neg_parts, nullptr, {}},
      {"wigner", check_wigner, is_wigner_sig, {{3}, {4}}},
  };
  return checks;
}

}  // namespace

nlohmann::json report_to_json(const CheckReport& report) {
  return {{"check", report.check},
          {"dims", report.dims},
          {"seed", report.seed},
          {"trials", report.trials},
          {"failures", report.failures},
          {"worst_deviation", report.worst_deviation},
          {"witness", report.witness},
          {"wall_time_seconds", report.wall_time_seconds}};
}

CheckReport report_from_json(const nlohmann::json& j) {
  CheckReport report;
  report.check = j.at("check").get<std::string>();
  report.dims = j.at("dims").get<std::vector<Signature>>();
  report.seed = j.at("seed").get<std::uint64_t>();
  report.trials = j.at("trials").get<int>();
  report.failures = j.at("failures").get<int>();
  report.worst_deviation = j.at("worst_deviation").get<double>();
  report.witness = j.value("witness", nlohmann::json());
  report.wall_time_seconds = j.value("wall_time_seconds", 0.0);
  return report;
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& check : registry()) out.emplace_back(check.name);
    return out;
  }();
  return names;
}

const std::vector<Signature>& default_signatures() {
  static const std::vector<Signature> dims = {{2}, {3}, {4}, {2, 3}, {1, 1, 1, 1}};
  return dims;
}

CheckReport run_check(const std::string& name, const std::vector<Signature>& dims,
                      int trials, std::uint64_t seed) {
  for (const auto& check : registry()) {
    if (name != check.name) continue;
    CheckContext ctx;
    ctx.dims = check.keep ? filtered(dims, check.keep, check.fallback) : dims;
    if (ctx.dims.empty()) ctx.dims = default_signatures();
    ctx.trials = trials;
    ctx.seed = seed;
    const auto start = std::chrono::steady_clock::now();
    CheckReport report = check.fn(ctx);
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
  }
  fail("verify: unknown check '" + name + "'");
}

std::vector<CheckReport> run_all(const std::vector<Signature>& dims, int trials,
                                 std::uint64_t seed) {
  std::vector<CheckReport> reports;
  reports.reserve(registry().size());
  for (const auto& check : registry()) {
    reports.push_back(run_check(check.name, dims, trials, seed));
  }
  return reports;
}

}  // namespace specord
