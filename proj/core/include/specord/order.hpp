#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include <specord/family.hpp>

namespace specord {

// x precedes y in the spectral order when E^y_lambda <= E^x_lambda for every
// lambda; both families are constant between merged breakpoints, so checking
// there decides the relation.
bool spectral_leq(const Element& x, const Element& y,
                  const ToleranceProfile& tol = default_tolerances());
bool spectral_leq(const SpectralFamily& fx, const SpectralFamily& fy,
                  const ToleranceProfile& tol = default_tolerances());

// Supremum family: pointwise meet of the member families over the merged
// breakpoint grid.
SpectralFamily sup_family(std::span<const SpectralFamily> families,
                          const ToleranceProfile& tol = default_tolerances());

// Infimum family: pointwise join of the member families. In finite dimension
// the step functions are already right-continuous, so the regularized form
// collapses to this one; both are computed and compared on every call.
SpectralFamily inf_family(std::span<const SpectralFamily> families,
                          const ToleranceProfile& tol = default_tolerances());
SpectralFamily inf_family_regularized(std::span<const SpectralFamily> families,
                                      const ToleranceProfile& tol = default_tolerances());

Element spectral_sup(std::span<const Element> xs,
                     const ToleranceProfile& tol = default_tolerances());
Element spectral_inf(std::span<const Element> xs,
                     const ToleranceProfile& tol = default_tolerances());
Element spectral_sup(const Element& x, const Element& y,
                     const ToleranceProfile& tol = default_tolerances());
Element spectral_inf(const Element& x, const Element& y,
                     const ToleranceProfile& tol = default_tolerances());

struct Certified {
  Element value;
  double certificate_deviation;  // distance to the spectral-family computation
};

// For orthogonal x, y the supremum is x^+ + y^+; the certificate compares the
// closed form against the family computation.
Certified sup_orthogonal(const Element& x, const Element& y,
                         const ToleranceProfile& tol = default_tolerances());

// For projections p, q and 0 <= alpha <= beta the supremum of alpha p and
// beta q is alpha (p join q - q) + beta q, certified the same way.
Certified sup_scaled_projections(double alpha, const Element& p, double beta,
                                 const Element& q,
                                 const ToleranceProfile& tol = default_tolerances());

struct DistributivityResult {
  bool distributive;
  // central: worst law defect over the sampled pairs; otherwise the violation
  // achieved by the constructive witness pair.
  double worst_deviation = 0.0;
  std::optional<std::pair<Element, Element>> witness;
};

// Central elements satisfy z sup (x inf y) = (z sup x) inf (z sup y) for all
// x, y; the check samples `trials` random pairs. A non-central z yields the
// witness pair |z|(2p - 1), |z|(1 - 2p) built from a non-central spectral
// projection of z.
DistributivityResult is_spectrally_distributive(
    const Element& z, int trials, std::uint64_t seed,
    const ToleranceProfile& tol = default_tolerances());

struct ChainClassification {
  bool scalar_atom = false;
  double lambda = 0.0;
  std::optional<Element> atom;
  std::optional<std::pair<Element, Element>> witness;  // incomparable pair below x
};

// Classifies a nonzero effect: either a scalar multiple of an atomic
// projection (every pair below it is comparable) or a witness pair below it
// that is incomparable in the spectral order.
ChainClassification chain_below(const Element& x,
                                const ToleranceProfile& tol = default_tolerances());

enum class ElementClass { positive, effect, projection };

struct ClosureReport {
  bool closed = true;
  double worst_deviation = 0.0;
  std::string detail;
};

// Checks that spectral sup and inf stay in the named class; for projections
// they must agree with the lattice join and meet.
ClosureReport sup_inf_closure_check(std::span<const Element> xs, ElementClass cls,
                                    const ToleranceProfile& tol = default_tolerances());

struct IndependenceReport {
  double sup_deviation = 0.0;
  double inf_deviation = 0.0;
};

// Suprema and infima of elements supported in a corner agree whether computed
// in the ambient algebra and compressed, or compressed first.
IndependenceReport independence_check(const Element& e, std::span<const Element> xs,
                                      const ToleranceProfile& tol = default_tolerances());

}  // namespace specord
