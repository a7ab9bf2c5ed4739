#include <specord/family.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace specord {

SpectralFamily::SpectralFamily(Algebra algebra, std::vector<Breakpoint> breakpoints,
                               const ToleranceProfile& tol)
    : algebra_(std::move(algebra)), breakpoints_(std::move(breakpoints)) {
  if (breakpoints_.empty()) fail("spectral family: no breakpoints");
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    const Breakpoint& bp = breakpoints_[i];
    if (!std::isfinite(bp.lambda)) fail("spectral family: non-finite breakpoint");
    if (!(bp.projection.algebra() == algebra_)) {
      fail("spectral family: projection algebra mismatch");
    }
    expect_projection(bp.projection, tol);
    if (i > 0) {
      if (!(breakpoints_[i - 1].lambda < bp.lambda)) {
        fail("spectral family: breakpoints must be strictly increasing");
      }
      if (!proj_leq(breakpoints_[i - 1].projection, bp.projection, tol)) {
        fail("spectral family: projections must be increasing");
      }
      if ((bp.projection - breakpoints_[i - 1].projection).operator_norm() <=
          tol.proj_tol) {
        fail("spectral family: projections must be strictly increasing");
      }
    }
  }
  const Element& last = breakpoints_.back().projection;
  if ((last - identity(algebra_)).operator_norm() > tol.proj_tol) {
    fail("spectral family: final projection must be the identity");
  }
}

SpectralFamily SpectralFamily::of(const Element& x, const ToleranceProfile& tol) {
  const auto pairs = eig(x, tol);
  std::vector<Breakpoint> breakpoints;
  breakpoints.reserve(pairs.size());
  Element cumulative = Element::zero(x.algebra());
  for (const SpectralProjector& sp : pairs) {
    cumulative = (cumulative + sp.projector).hermitized();
    breakpoints.push_back({sp.eigenvalue, cumulative});
  }
  return SpectralFamily(x.algebra(), std::move(breakpoints), tol);
}

SpectralFamily family_of(const Element& x, const ToleranceProfile& tol) {
  return SpectralFamily::of(x, tol);
}

bool is_positive_family(const SpectralFamily& f, const ToleranceProfile& tol) {
  return f.first_lambda() >= -tol.psd_floor;
}

bool is_effect_family(const SpectralFamily& f, const ToleranceProfile& tol) {
  return is_positive_family(f, tol) && f.last_lambda() <= 1.0 + tol.psd_floor;
}

Element SpectralFamily::evaluate(double lambda) const {
  // index of the last breakpoint with lambda_i <= lambda
  auto it = std::upper_bound(
      breakpoints_.begin(), breakpoints_.end(), lambda,
      [](double v, const Breakpoint& bp) { return v < bp.lambda; });
  if (it == breakpoints_.begin()) return Element::zero(algebra_);
  return std::prev(it)->projection;
}

Element SpectralFamily::reconstruct() const {
  Element x = Element::zero(algebra_);
  Element previous = Element::zero(algebra_);
  for (const Breakpoint& bp : breakpoints_) {
    x = x + bp.lambda * (bp.projection - previous);
    previous = bp.projection;
  }
  return x.hermitized();
}

SpectralFamily SpectralFamily::rescaled(double alpha, const ToleranceProfile& tol) const {
  if (!(alpha > 0.0)) fail("rescale: factor must be strictly positive");
  std::vector<Breakpoint> mapped;
  mapped.reserve(breakpoints_.size());
  for (const Breakpoint& bp : breakpoints_) {
    mapped.push_back({alpha * bp.lambda, bp.projection});
  }
  return SpectralFamily(algebra_, std::move(mapped), tol);
}

SpectralFamily SpectralFamily::translated(double alpha, const ToleranceProfile& tol) const {
  if (!std::isfinite(alpha)) fail("translate: shift must be finite");
  std::vector<Breakpoint> mapped;
  mapped.reserve(breakpoints_.size());
  for (const Breakpoint& bp : breakpoints_) {
    mapped.push_back({bp.lambda + alpha, bp.projection});
  }
  return SpectralFamily(algebra_, std::move(mapped), tol);
}

double family_axiom_defect(const SpectralFamily& f) {
  double defect = 0.0;
  const auto bps = f.breakpoints();
  for (std::size_t i = 0; i < bps.size(); ++i) {
    const Element& e = bps[i].projection;
    defect = std::max(defect, (e * e - e).operator_norm());
    defect = std::max(defect, e.hermitian_defect());
    if (i > 0) {
      const Element& prev = bps[i - 1].projection;
      defect = std::max(defect, (prev * e - prev).operator_norm());
      // step convention: the family is constant on [lambda_i, lambda_{i+1})
      const double mid = 0.5 * (bps[i - 1].lambda + bps[i].lambda);
      defect = std::max(defect, (f.evaluate(mid) - prev).operator_norm());
    }
  }
  defect = std::max(defect,
                    (bps.back().projection - identity(f.algebra())).operator_norm());
  defect = std::max(defect, f.evaluate(bps.front().lambda - 1.0).operator_norm());
  return defect;
}

double defining_inequality_defect(const Element& x, const SpectralFamily& f) {
  const Element one = identity(x.algebra());
  double defect = 0.0;
  for (const Breakpoint& bp : f.breakpoints()) {
    const Element& e = bp.projection;
    const Element xe = (x * e).hermitized();
    const Element low = (bp.lambda * e - xe).hermitized();
    defect = std::max(defect, std::max(0.0, -min_eigenvalue(low)));
    const Element rest = one - e;
    const Element xrest = (x * rest).hermitized();
    const Element high = (xrest - bp.lambda * rest).hermitized();
    defect = std::max(defect, std::max(0.0, -min_eigenvalue(high)));
  }
  return defect;
}

bool families_equal(const SpectralFamily& a, const SpectralFamily& b,
                    const ToleranceProfile& tol) {
  if (!(a.algebra() == b.algebra())) return false;
  if (a.size() != b.size()) return false;
  double scale = 1.0;
  for (const Breakpoint& bp : a.breakpoints()) scale = std::max(scale, std::abs(bp.lambda));
  for (const Breakpoint& bp : b.breakpoints()) scale = std::max(scale, std::abs(bp.lambda));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a.breakpoints()[i].lambda - b.breakpoints()[i].lambda) >
        tol.eig_cluster * scale) {
      return false;
    }
    if ((a.breakpoints()[i].projection - b.breakpoints()[i].projection)
            .operator_norm() > tol.proj_tol) {
      return false;
    }
  }
  return true;
}

double chain_alignment_defect(const SpectralFamily& sub, const SpectralFamily& full) {
  const auto rank_of = [](const Element& p) {
    return static_cast<int>(std::lround(p.trace().real()));
  };
  double defect = 0.0;
  for (const Breakpoint& bp : sub.breakpoints()) {
    const int rank = rank_of(bp.projection);
    bool matched = false;
    for (const Breakpoint& candidate : full.breakpoints()) {
      if (rank_of(candidate.projection) == rank) {
        defect = std::max(defect,
                          (bp.projection - candidate.projection).operator_norm());
        matched = true;
        break;
      }
    }
    if (!matched) return std::numeric_limits<double>::infinity();
  }
  return defect;
}

std::vector<double> merged_breakpoints(std::span<const SpectralFamily> families) {
  std::vector<double> grid;
  for (const SpectralFamily& f : families) {
    for (const Breakpoint& bp : f.breakpoints()) grid.push_back(bp.lambda);
  }
  std::sort(grid.begin(), grid.end());
  std::vector<double> merged;
  for (double v : grid) {
    if (merged.empty() ||
        v - merged.back() > 1e-12 * std::max({1.0, std::abs(v), std::abs(merged.back())})) {
      merged.push_back(v);
    } else {
      // keep the largest representative: evaluating there sees every jump of
      // the cluster, evaluating below it would miss the later ones
      merged.back() = v;
    }
  }
  return merged;
}

CornerFamilyResult corner_family(const SpectralFamily& f, const Element& e,
                                 const ToleranceProfile& tol) {
  const Element x = f.reconstruct();
  expect_same_algebra(e, x);
  if ((x - e * x * e).operator_norm() > tol.order_tol * std::max(1.0, x.operator_norm())) {
    fail("corner family: element not supported in the projection's corner");
  }
  const CornerBasis cb = corner_basis(e, tol);
  const Element rest = identity(e.algebra()) - e;

  double scale = 1.0;
  for (const Breakpoint& bp : f.breakpoints()) scale = std::max(scale, std::abs(bp.lambda));
  const double zero_width = tol.eig_cluster * scale;

  std::vector<Breakpoint> kept;
  Element previous = Element::zero(cb.corner);
  double residue = 0.0;
  for (const Breakpoint& bp : f.breakpoints()) {
    const Element compressed = corner_compress(cb, bp.projection).hermitized();
    if ((compressed - previous).operator_norm() > tol.proj_tol) {
      kept.push_back({bp.lambda, compressed});
      previous = compressed;
    }
    const Element outside = rest * bp.projection;
    if (bp.lambda < -zero_width) {
      residue = std::max(residue, outside.operator_norm());
    } else {
      residue = std::max(residue, (outside - rest).operator_norm());
    }
  }
  return {SpectralFamily(cb.corner, std::move(kept), tol), residue};
}

}  // namespace specord
