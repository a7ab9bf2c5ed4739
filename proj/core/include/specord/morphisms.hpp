#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <specord/order.hpp>
#include <specord/rng.hpp>

namespace specord {

enum class DomainTag { real, positive, unit };

std::string to_string(DomainTag tag);
DomainTag domain_tag_from_string(const std::string& name);
bool domain_contains(DomainTag tag, double t, double slack = 1e-8);
double domain_clamp(DomainTag tag, double t, double slack = 1e-8);

// Strictly increasing piecewise-linear bijection of the real line, the
// non-negative half line, or the unit interval. The half-line and real
// variants extend the terminal segments linearly; the unit variant is pinned
// to (0,0) and (1,1), the half-line variant to (0,0).
class MonotoneBijection {
 public:
  using Knot = std::pair<double, double>;

  MonotoneBijection(DomainTag domain, std::vector<Knot> knots);
  static MonotoneBijection identity_on(DomainTag domain);

  DomainTag domain() const noexcept { return domain_; }
  const std::vector<Knot>& knots() const noexcept { return knots_; }

  double operator()(double t) const;
  MonotoneBijection inverse() const;
  MonotoneBijection compose_after(const MonotoneBijection& inner) const;
  bool fixes_zero(double tol = 1e-12) const;

 private:
  DomainTag domain_;
  std::vector<Knot> knots_;
};

// Blockwise *-isomorphism data: a dimension-preserving block permutation, one
// unitary per source block and an optional transpose per source block. The
// image of block k lands in target slot perm[k].
class JordanSpec {
 public:
  JordanSpec(Algebra source, std::vector<int> perm, std::vector<Matrix> unitaries,
             std::vector<bool> transposed,
             const ToleranceProfile& tol = default_tolerances());

  static JordanSpec identity_on(const Algebra& algebra);
  static JordanSpec transpose_on(const Algebra& algebra);

  const Algebra& source() const noexcept { return source_; }
  const Algebra& target() const noexcept { return target_; }
  const std::vector<int>& perm() const noexcept { return perm_; }
  const std::vector<Matrix>& unitaries() const noexcept { return unitaries_; }
  const std::vector<bool>& transposed() const noexcept { return transposed_; }

  JordanSpec inverse() const;
  JordanSpec compose_after(const JordanSpec& inner) const;

 private:
  Algebra source_;
  Algebra target_;
  std::vector<int> perm_;
  std::vector<Matrix> unitaries_;
  std::vector<bool> transposed_;
};

// y_{perm[k]} = u_k x_k u_k^* (with x_k transposed first when flagged).
Element apply_jordan(const JordanSpec& j, const Element& x);

// Transports the spectral family breakpoint by breakpoint through the
// projection action of j and reconstructs; cross-checked against the direct
// blockwise action on every call.
Element theta(const JordanSpec& j, const Element& x,
              const ToleranceProfile& tol = default_tolerances());

// Function calculus: maps the clustered eigenvalues through f and rebuilds;
// verifies the family identity E^{f(x)}_mu = E^x_{f^{-1}(mu)} at the jump
// points of the result.
Element apply_calc(const MonotoneBijection& f, const Element& x,
                   const ToleranceProfile& tol = default_tolerances());

// Left-to-right composition of function-calculus and family-transport steps;
// the concrete encoding of a supplied spectral order isomorphism.
class IsoPipeline {
 public:
  using Step = std::variant<MonotoneBijection, JordanSpec>;

  IsoPipeline(Algebra source, std::vector<Step> steps,
              std::optional<DomainTag> domain = std::nullopt,
              const ToleranceProfile& tol = default_tolerances());

  static IsoPipeline identity_on(const Algebra& algebra, DomainTag domain);

  const Algebra& source() const noexcept { return source_; }
  const Algebra& target() const noexcept { return target_; }
  DomainTag domain() const noexcept { return domain_; }
  std::span<const Step> steps() const noexcept { return steps_; }

  Element apply(const Element& x,
                const ToleranceProfile& tol = default_tolerances()) const;

  // Action on the scalar line: the image of lambda * identity is
  // scalar_action(lambda) * identity. Piecewise-linear steps make the inverse
  // exact.
  double scalar_action(double lambda) const;
  double scalar_action_inverse(double mu) const;

 private:
  Algebra source_;
  Algebra target_;
  DomainTag domain_;
  std::vector<Step> steps_;
};

// Exact composition of the pipeline's calculus steps (identity when none).
MonotoneBijection composed_calc(const IsoPipeline& pipeline);
// Exact composition of the pipeline's transport steps, when any.
std::optional<JordanSpec> composed_jordan(const IsoPipeline& pipeline);

struct CanonicalDecomposition {
  std::vector<double> grid;        // uniform samples of [0, 1]
  std::vector<double> f_samples;   // scalar action at the grid
  std::vector<std::pair<Element, Element>> tau_samples;  // (projection, image)
  double worst_scalar_defect = 0.0;      // distance of phi(lambda 1) from scalars
  double worst_projection_defect = 0.0;  // distance of tau samples from projections
  double residual = 0.0;  // worst |phi(x) - transport(f(x))| over probe effects
};

// Splits an isomorphism of the effect interval of a factor into its scalar
// function and its projection map, then measures how well that pair
// reproduces the map on probe effects (f applied by interpolation on the
// sample grid).
CanonicalDecomposition canonical_decompose(
    const IsoPipeline& phi, int probes, std::uint64_t seed,
    const ToleranceProfile& tol = default_tolerances());

// Residual for externally supplied f samples; used as a negative control for
// tampered grids.
double canonical_residual(const IsoPipeline& phi, std::span<const double> grid,
                          std::span<const double> f_samples, int probes,
                          std::uint64_t seed,
                          const ToleranceProfile& tol = default_tolerances());

struct ExtensionReport {
  std::vector<double> alphas;
  double worst_class_defect = 0.0;      // escape from effects resp. positives
  double worst_alpha_deviation = 0.0;   // disagreement across the alpha family
  double worst_canonical_deviation = 0.0;  // disagreement with the alpha = 1 pair
};

// For a map of the positive cones, phi_alpha(x) = phi(f^{-1}(alpha x)) / alpha
// must send effects to effects and agree with the pair extracted at alpha = 1.
ExtensionReport extend_to_positive(const IsoPipeline& phi, int probes,
                                   std::uint64_t seed,
                                   const ToleranceProfile& tol = default_tolerances());

// For a map of the self-adjoint parts, the normalization phi' = phi o f^{-1}
// satisfies phi'_alpha(x) = phi'(x - alpha 1) + alpha 1 = phi'(x) on positive
// probes for every alpha > 0.
ExtensionReport extend_to_selfadjoint(const IsoPipeline& phi, int probes,
                                      std::uint64_t seed,
                                      const ToleranceProfile& tol = default_tolerances());

struct OrthoVerdict {
  bool ortho = true;
  std::optional<std::pair<Element, Element>> witness;
  bool witness_was_orthogonal = false;  // true: orthogonality lost, false: gained
};

// Tests xy = 0 <=> phi(x) phi(y) = 0 over constructed orthogonal and
// non-orthogonal pairs (always including the pair (0, 0)).
OrthoVerdict is_ortho_iso(const IsoPipeline& phi, int trials, std::uint64_t seed,
                          const ToleranceProfile& tol = default_tolerances());

using ProjectionOracle = std::function<Matrix(const Matrix&)>;

// Recovers the unitary (and a possible transpose) implementing an
// orthogonality-preserving map of rank-one projections of M_n, n >= 3:
// images of the basis projections fix the frame, images of the projections
// onto e_1 + e_j fix the relative phases, and the projection onto
// e_1 + i e_2 separates the linear from the conjugate-linear branch.
JordanSpec wigner_reconstruct(int n, const ProjectionOracle& tau, int verify_probes,
                              std::uint64_t seed,
                              const ToleranceProfile& tol = default_tolerances());

// Distance up to a global phase; the reconstruction is unique only modulo it.
double unitary_phase_distance(const Matrix& a, const Matrix& b);

struct OrthoFactorization {
  bool refused = false;
  std::string refusal_reason;
  std::optional<std::pair<Element, Element>> ortho_witness;
  std::vector<double> grid;
  std::vector<double> f_samples;
  std::optional<JordanSpec> psi;
  double residual = 0.0;
  double pos_neg_deviation = 0.0;  // real-domain pipelines only
};

// Factorizes an orthogonality-preserving isomorphism on a factor of dimension
// n >= 3 into a scalar function and a Jordan map, verifying the product on
// probe elements; dimension-2 factors are rejected outright.
OrthoFactorization ortho_iso_factorize(const IsoPipeline& phi, int probes,
                                       std::uint64_t seed,
                                       const ToleranceProfile& tol = default_tolerances());

// Generators for randomized suites. fix_zero pins a (0, 0) knot, which only
// matters on the real domain where it is not forced by the endpoints.
MonotoneBijection random_monotone_bijection(DomainTag domain, int interior_knots,
                                            Rng& rng, bool fix_zero = false);
JordanSpec random_jordan(const Algebra& algebra, Rng& rng);
IsoPipeline random_pipeline(const Algebra& algebra, DomainTag domain, int max_steps,
                            Rng& rng, bool calc_fix_zero = false);

}  // namespace specord
