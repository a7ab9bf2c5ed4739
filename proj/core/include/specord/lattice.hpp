#pragma once

#include <optional>
#include <span>

#include <specord/algebra.hpp>

namespace specord {

// Order on the projection lattice: p <= q iff pq = p within order_tol.
bool proj_leq(const Element& p, const Element& q,
              const ToleranceProfile& tol = default_tolerances());

// Projector onto the sum of the ranges. Rank decisions use a singular-value
// threshold of 1e-7 * max(leading singular value, 1) on the stacked bases.
Element join_all(std::span<const Element> ps,
                 const ToleranceProfile& tol = default_tolerances());
Element join(const Element& p, const Element& q,
             const ToleranceProfile& tol = default_tolerances());

// Projector onto the intersection of the ranges, computed as the complement
// of the join of the complements.
Element meet_all(std::span<const Element> ps,
                 const ToleranceProfile& tol = default_tolerances());
Element meet(const Element& p, const Element& q,
             const ToleranceProfile& tol = default_tolerances());

Element complement(const Element& p,
                   const ToleranceProfile& tol = default_tolerances());

int projection_rank(const Element& p,
                    const ToleranceProfile& tol = default_tolerances());

// A projection is atomic exactly when its total rank across blocks is one.
bool is_atomic(const Element& p,
               const ToleranceProfile& tol = default_tolerances());

// Central elements are blockwise scalar multiples of the block identities.
bool is_central(const Element& z,
                const ToleranceProfile& tol = default_tolerances());

// For a non-central projection z, returns a projection p violating
// z = (z meet p) join (z meet complement(p)); the construction takes unit
// vectors v in range(z) and w in ker(z) inside the block with the largest
// off-scalar deviation and projects onto v + w, so z meet p = 0 while
// z meet complement(p) drops rank. Central z yields nullopt.
std::optional<Element> central_proj_witness(
    const Element& z, const ToleranceProfile& tol = default_tolerances());

}  // namespace specord
