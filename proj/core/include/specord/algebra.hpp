#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace specord {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Signature = std::vector<int>;

// Throws std::invalid_argument naming the violated invariant.
[[noreturn]] void fail(const std::string& what);

// Global tolerance policy. Every approximate comparison in the library is
// expressed through one of these knobs.
struct ToleranceProfile {
  double eig_cluster = 1e-8;  // relative eigenvalue-grouping width
  double psd_floor = 1e-9;    // most negative admissible eigenvalue
  double proj_tol = 1e-9;     // idempotency / self-adjointness bound
  double order_tol = 1e-9;    // projection-order tests
  double hermitian = 1e-10;   // hermitian defect bound

  void validate() const;
};

const ToleranceProfile& default_tolerances();

// A finite direct sum of full complex matrix blocks, identified by the list
// of block dimensions.
class Algebra {
 public:
  explicit Algebra(Signature signature);

  const Signature& signature() const noexcept { return signature_; }
  int block_count() const noexcept { return static_cast<int>(signature_.size()); }
  int block_dim(int k) const { return signature_.at(static_cast<std::size_t>(k)); }
  int total_dim() const noexcept { return total_dim_; }  // sum of n_k
  int dim() const noexcept { return dim_; }              // sum of n_k^2
  bool is_factor() const noexcept { return signature_.size() == 1; }
  bool is_abelian() const noexcept;

  bool operator==(const Algebra& other) const noexcept {
    return signature_ == other.signature_;
  }

 private:
  Signature signature_;
  int total_dim_ = 0;
  int dim_ = 0;
};

std::string to_string(const Signature& signature);

// Block-diagonal element of an Algebra. Immutable in practice: operations
// return fresh values.
class Element {
 public:
  Element(Algebra algebra, std::vector<Matrix> blocks);

  static Element zero(const Algebra& algebra);

  // values are immutable after construction; operations return fresh elements
  const Algebra& algebra() const noexcept { return algebra_; }
  int block_count() const noexcept { return static_cast<int>(blocks_.size()); }
  const Matrix& block(int k) const { return blocks_.at(static_cast<std::size_t>(k)); }
  std::span<const Matrix> blocks() const noexcept { return blocks_; }

  Element operator+(const Element& other) const;
  Element operator-(const Element& other) const;
  Element operator-() const;
  Element operator*(const Element& other) const;  // blockwise matrix product
  Element adjoint() const;
  Element transposed() const;
  Element hermitized() const;  // (x + x*) / 2

  double operator_norm() const;  // largest block spectral norm
  double hermitian_defect() const;
  Complex trace() const;

 private:
  Algebra algebra_;
  std::vector<Matrix> blocks_;
};

Element operator*(double scalar, const Element& x);
Element operator*(Complex scalar, const Element& x);

Element identity(const Algebra& algebra);

void expect_same_algebra(const Element& x, const Element& y);
bool is_hermitian(const Element& x,
                  const ToleranceProfile& tol = default_tolerances());
void expect_hermitian(const Element& x,
                      const ToleranceProfile& tol = default_tolerances());
bool is_projection(const Element& p,
                   const ToleranceProfile& tol = default_tolerances());
void expect_projection(const Element& p,
                       const ToleranceProfile& tol = default_tolerances());
bool approx_equal(const Element& x, const Element& y, double tol);

// One clustered eigenvalue with its spectral projector.
struct SpectralProjector {
  double eigenvalue;
  Element projector;
};

// Hermitian eigendecomposition with relative-gap clustering: neighbouring
// eigenvalues closer than eig_cluster * max(1, |x|) are merged into a single
// projector. Projectors are mutually orthogonal and sum to the identity; the
// clustered values are sorted ascending.
std::vector<SpectralProjector> eig(const Element& x,
                                   const ToleranceProfile& tol = default_tolerances());

double min_eigenvalue(const Element& x);  // hermitian input assumed
double max_eigenvalue(const Element& x);

bool loewner_leq(const Element& x, const Element& y,
                 const ToleranceProfile& tol = default_tolerances());
bool orthogonal(const Element& x, const Element& y,
                const ToleranceProfile& tol = default_tolerances());
std::pair<Element, Element> pos_neg_parts(
    const Element& x, const ToleranceProfile& tol = default_tolerances());
bool is_positive(const Element& x,
                 const ToleranceProfile& tol = default_tolerances());
bool is_effect(const Element& x,
               const ToleranceProfile& tol = default_tolerances());

// Returns mu when x is mu * identity (within order_tol), otherwise nullopt.
std::optional<double> scalar_of(const Element& x,
                                const ToleranceProfile& tol = default_tolerances());

// Compression data for the corner algebra cut out by a projection e. The
// per-block bases come from a column-pivoted orthonormalization of e, so the
// corner is reproducible across runs; rank-zero blocks are dropped from the
// corner signature.
struct CornerBasis {
  Algebra ambient;
  Algebra corner;
  std::vector<int> ranks;      // per ambient block
  std::vector<Matrix> bases;   // n_k x r_k isometries, 0x0 when r_k = 0
};

CornerBasis corner_basis(const Element& e,
                         const ToleranceProfile& tol = default_tolerances());
Element corner_compress(const CornerBasis& cb, const Element& x);
Element corner_embed(const CornerBasis& cb, const Element& corner_x);

// Compression e x e viewed inside the corner algebra; rejects x that is not
// supported in the corner.
Element corner(const Element& e, const Element& x,
               const ToleranceProfile& tol = default_tolerances());

}  // namespace specord
