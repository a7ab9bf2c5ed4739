#pragma once

#include <span>
#include <vector>

#include <specord/algebra.hpp>
#include <specord/lattice.hpp>

namespace specord {

struct Breakpoint {
  double lambda;
  Element projection;
};

// Right-continuous increasing step function lambda -> E_lambda with finitely
// many jumps. The value is 0 strictly below the first breakpoint, the stored
// projection on [lambda_i, lambda_{i+1}), and the identity from the last
// breakpoint on. Breakpoints are strictly increasing in both coordinates and
// the final projection is the identity.
class SpectralFamily {
 public:
  SpectralFamily(Algebra algebra, std::vector<Breakpoint> breakpoints,
                 const ToleranceProfile& tol = default_tolerances());

  static SpectralFamily of(const Element& x,
                           const ToleranceProfile& tol = default_tolerances());

  const Algebra& algebra() const noexcept { return algebra_; }
  std::span<const Breakpoint> breakpoints() const noexcept { return breakpoints_; }
  std::size_t size() const noexcept { return breakpoints_.size(); }
  double first_lambda() const { return breakpoints_.front().lambda; }
  double last_lambda() const { return breakpoints_.back().lambda; }

  Element evaluate(double lambda) const;
  Element reconstruct() const;

  SpectralFamily rescaled(double alpha,
                          const ToleranceProfile& tol = default_tolerances()) const;
  SpectralFamily translated(double alpha,
                            const ToleranceProfile& tol = default_tolerances()) const;

 private:
  Algebra algebra_;
  std::vector<Breakpoint> breakpoints_;
};

SpectralFamily family_of(const Element& x,
                         const ToleranceProfile& tol = default_tolerances());

// Range refinements: every breakpoint inside [0, 1] resp. [0, inf), up to
// the positivity floor.
bool is_effect_family(const SpectralFamily& f,
                      const ToleranceProfile& tol = default_tolerances());
bool is_positive_family(const SpectralFamily& f,
                        const ToleranceProfile& tol = default_tolerances());

// Worst defect over the family axioms: monotone breakpoints, projections,
// step-function right-continuity, final projection equal to the identity.
double family_axiom_defect(const SpectralFamily& f);

// Worst Loewner defect of the two inequalities x E <= lambda E and
// lambda (1 - E) <= x (1 - E) over all breakpoints.
double defining_inequality_defect(const Element& x, const SpectralFamily& f);

// Families over different algebras never compare equal. Otherwise equality
// means equal breakpoint count, |lambda_i - lambda'_i| within the relative
// clustering width, and projections within proj_tol.
bool families_equal(const SpectralFamily& a, const SpectralFamily& b,
                    const ToleranceProfile& tol = default_tolerances());

// Worst distance between the projections of `sub` and the equal-rank
// projections of `full` (infinite when a rank is missing). A strictly
// increasing eigenvalue map relabels the jump values of a family but keeps
// its chain of cumulative projections, so the image chain must embed into
// the source chain rank by rank.
double chain_alignment_defect(const SpectralFamily& sub, const SpectralFamily& full);

std::vector<double> merged_breakpoints(std::span<const SpectralFamily> families);

struct CornerFamilyResult {
  SpectralFamily family;     // compressed into the corner cut out by e
  double residue_deviation;  // worst defect of the complementary-corner law
};

// Compresses every breakpoint projection by e into the corner algebra and
// verifies that the complementary part (1 - e) E_lambda vanishes below zero
// and equals 1 - e from zero on, reporting the worst deviation.
CornerFamilyResult corner_family(const SpectralFamily& f, const Element& e,
                                 const ToleranceProfile& tol = default_tolerances());

}  // namespace specord
