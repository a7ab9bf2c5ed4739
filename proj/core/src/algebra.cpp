#include <specord/algebra.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace specord {

void fail(const std::string& what) { throw std::invalid_argument(what); }

void ToleranceProfile::validate() const {
  if (eig_cluster <= 0 || psd_floor <= 0 || proj_tol <= 0 || order_tol <= 0 ||
      hermitian <= 0) {
    fail("tolerance profile: all tolerances must be strictly positive");
  }
}

const ToleranceProfile& default_tolerances() {
  static const ToleranceProfile tol{};
  return tol;
}

Algebra::Algebra(Signature signature) : signature_(std::move(signature)) {
  if (signature_.empty()) fail("algebra signature: must be non-empty");
  for (int n : signature_) {
    if (n < 1) fail("algebra signature: block dimensions must be >= 1");
    total_dim_ += n;
    dim_ += n * n;
  }
}

bool Algebra::is_abelian() const noexcept {
  return std::all_of(signature_.begin(), signature_.end(),
                     [](int n) { return n == 1; });
}

std::string to_string(const Signature& signature) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < signature.size(); ++i) {
    if (i) out << ',';
    out << signature[i];
  }
  out << ']';
  return out.str();
}

Element::Element(Algebra algebra, std::vector<Matrix> blocks)
    : algebra_(std::move(algebra)), blocks_(std::move(blocks)) {
  if (static_cast<int>(blocks_.size()) != algebra_.block_count()) {
    fail("element blocks: block count does not match signature");
  }
  for (int k = 0; k < algebra_.block_count(); ++k) {
    const int n = algebra_.block_dim(k);
    if (blocks_[static_cast<std::size_t>(k)].rows() != n ||
        blocks_[static_cast<std::size_t>(k)].cols() != n) {
      fail("element blocks: block " + std::to_string(k) +
           " shape does not match signature");
    }
  }
}

Element Element::zero(const Algebra& algebra) {
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<std::size_t>(algebra.block_count()));
  for (int k = 0; k < algebra.block_count(); ++k) {
    blocks.push_back(Matrix::Zero(algebra.block_dim(k), algebra.block_dim(k)));
  }
  return Element(algebra, std::move(blocks));
}

namespace {

template <typename Fn>
Element blockwise(const Element& x, Fn&& fn) {
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<std::size_t>(x.block_count()));
  for (int k = 0; k < x.block_count(); ++k) blocks.push_back(fn(x.block(k)));
  return Element(x.algebra(), std::move(blocks));
}

template <typename Fn>
Element blockwise(const Element& x, const Element& y, Fn&& fn) {
  expect_same_algebra(x, y);
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<std::size_t>(x.block_count()));
  for (int k = 0; k < x.block_count(); ++k) {
    blocks.push_back(fn(x.block(k), y.block(k)));
  }
  return Element(x.algebra(), std::move(blocks));
}

}  // namespace

Element Element::operator+(const Element& other) const {
  return blockwise(*this, other, [](const Matrix& a, const Matrix& b) {
    return Matrix(a + b);
  });
}

Element Element::operator-(const Element& other) const {
  return blockwise(*this, other, [](const Matrix& a, const Matrix& b) {
    return Matrix(a - b);
  });
}

Element Element::operator-() const {
  return blockwise(*this, [](const Matrix& a) { return Matrix(-a); });
}

Element Element::operator*(const Element& other) const {
  return blockwise(*this, other, [](const Matrix& a, const Matrix& b) {
    return Matrix(a * b);
  });
}

Element Element::adjoint() const {
  return blockwise(*this, [](const Matrix& a) { return Matrix(a.adjoint()); });
}

Element Element::transposed() const {
  return blockwise(*this, [](const Matrix& a) { return Matrix(a.transpose()); });
}

Element Element::hermitized() const {
  return blockwise(*this, [](const Matrix& a) {
    return Matrix(0.5 * (a + a.adjoint()));
  });
}

double Element::operator_norm() const {
  double norm = 0.0;
  for (const Matrix& b : blocks_) norm = std::max(norm, b.operatorNorm());
  return norm;
}

double Element::hermitian_defect() const {
  double defect = 0.0;
  for (const Matrix& b : blocks_) {
    defect = std::max(defect, Matrix(b - b.adjoint()).operatorNorm());
  }
  return defect;
}

Complex Element::trace() const {
  Complex t = 0.0;
  for (const Matrix& b : blocks_) t += b.trace();
  return t;
}

Element operator*(double scalar, const Element& x) {
  return Complex(scalar, 0.0) * x;
}

Element operator*(Complex scalar, const Element& x) {
  return blockwise(x, [scalar](const Matrix& a) { return Matrix(scalar * a); });
}

Element identity(const Algebra& algebra) {
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<std::size_t>(algebra.block_count()));
  for (int k = 0; k < algebra.block_count(); ++k) {
    blocks.push_back(Matrix::Identity(algebra.block_dim(k), algebra.block_dim(k)));
  }
  return Element(algebra, std::move(blocks));
}

void expect_same_algebra(const Element& x, const Element& y) {
  if (!(x.algebra() == y.algebra())) fail("algebra mismatch");
}

bool is_hermitian(const Element& x, const ToleranceProfile& tol) {
  return x.hermitian_defect() <= tol.hermitian * std::max(1.0, x.operator_norm());
}

void expect_hermitian(const Element& x, const ToleranceProfile& tol) {
  if (!is_hermitian(x, tol)) fail("hermitian: element is not self-adjoint");
}

bool is_projection(const Element& p, const ToleranceProfile& tol) {
  if (p.hermitian_defect() > tol.proj_tol) return false;
  return (p * p - p).operator_norm() <= tol.proj_tol;
}

void expect_projection(const Element& p, const ToleranceProfile& tol) {
  if (p.hermitian_defect() > tol.proj_tol) {
    fail("projection: self-adjointness violated");
  }
  if ((p * p - p).operator_norm() > tol.proj_tol) {
    fail("projection: idempotency violated");
  }
}

bool approx_equal(const Element& x, const Element& y, double tol) {
  if (!(x.algebra() == y.algebra())) return false;
  return (x - y).operator_norm() <= tol;
}

std::vector<SpectralProjector> eig(const Element& x, const ToleranceProfile& tol) {
  expect_hermitian(x, tol);

  struct Entry {
    double value;
    int block;
    int col;
  };
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(x.algebra().total_dim()));
  std::vector<Matrix> vectors;
  vectors.reserve(static_cast<std::size_t>(x.block_count()));

  double scale = 0.0;
  for (int k = 0; k < x.block_count(); ++k) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(x.block(k));
    if (solver.info() != Eigen::Success) fail("eig: eigensolver failed");
    vectors.push_back(solver.eigenvectors());
    const auto& values = solver.eigenvalues();
    for (int c = 0; c < values.size(); ++c) {
      entries.push_back({values(c), k, c});
      scale = std::max(scale, std::abs(values(c)));
    }
  }

  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.block != b.block) return a.block < b.block;
    return a.col < b.col;
  });

  const double gap = tol.eig_cluster * std::max(1.0, scale);
  std::vector<SpectralProjector> result;
  std::size_t i = 0;
  while (i < entries.size()) {
    std::size_t j = i + 1;
    while (j < entries.size() && entries[j].value - entries[j - 1].value <= gap) {
      ++j;
    }
    double mean = 0.0;
    std::vector<Matrix> blocks;
    for (int k = 0; k < x.block_count(); ++k) {
      blocks.push_back(Matrix::Zero(x.algebra().block_dim(k), x.algebra().block_dim(k)));
    }
    for (std::size_t e = i; e < j; ++e) {
      mean += entries[e].value;
      const auto v = vectors[static_cast<std::size_t>(entries[e].block)].col(entries[e].col);
      blocks[static_cast<std::size_t>(entries[e].block)] += v * v.adjoint();
    }
    mean /= static_cast<double>(j - i);
    result.push_back({mean, Element(x.algebra(), std::move(blocks))});
    i = j;
  }
  return result;
}

double min_eigenvalue(const Element& x) {
  double m = std::numeric_limits<double>::infinity();
  for (int k = 0; k < x.block_count(); ++k) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(x.block(k), Eigen::EigenvaluesOnly);
    m = std::min(m, solver.eigenvalues().minCoeff());
  }
  return m;
}

double max_eigenvalue(const Element& x) {
  double m = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < x.block_count(); ++k) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(x.block(k), Eigen::EigenvaluesOnly);
    m = std::max(m, solver.eigenvalues().maxCoeff());
  }
  return m;
}

bool loewner_leq(const Element& x, const Element& y, const ToleranceProfile& tol) {
  expect_same_algebra(x, y);
  expect_hermitian(x, tol);
  expect_hermitian(y, tol);
  const Element d = (y - x).hermitized();
  const double lo = min_eigenvalue(d);
  const double hi = max_eigenvalue(d);
  const double scale = std::max(std::abs(lo), std::abs(hi));
  return lo >= -tol.psd_floor * std::max(1.0, scale);
}

bool orthogonal(const Element& x, const Element& y, const ToleranceProfile& tol) {
  expect_same_algebra(x, y);
  expect_hermitian(x, tol);
  expect_hermitian(y, tol);
  const double product = (x * y).operator_norm();
  return product <= tol.order_tol * std::max(1.0, x.operator_norm() * y.operator_norm());
}

std::pair<Element, Element> pos_neg_parts(const Element& x, const ToleranceProfile& tol) {
  Element pos = Element::zero(x.algebra());
  Element neg = Element::zero(x.algebra());
  for (const SpectralProjector& sp : eig(x, tol)) {
    if (sp.eigenvalue > 0.0) {
      pos = pos + sp.eigenvalue * sp.projector;
    } else if (sp.eigenvalue < 0.0) {
      neg = neg + (-sp.eigenvalue) * sp.projector;
    }
  }
  return {pos, neg};
}

bool is_positive(const Element& x, const ToleranceProfile& tol) {
  return loewner_leq(Element::zero(x.algebra()), x, tol);
}

bool is_effect(const Element& x, const ToleranceProfile& tol) {
  return is_positive(x, tol) && loewner_leq(x, identity(x.algebra()), tol);
}

std::optional<double> scalar_of(const Element& x, const ToleranceProfile& tol) {
  const double mu = (x.trace() / static_cast<double>(x.algebra().total_dim())).real();
  Element delta = x - mu * identity(x.algebra());
  if (delta.operator_norm() <= tol.order_tol * std::max(1.0, std::abs(mu))) return mu;
  return std::nullopt;
}

namespace {

// First r columns of Q from a column-pivoted QR of m form an orthonormal
// basis of range(m); r must be the exact rank. Column phases are normalized
// so the corner bases are identical across runs.
Matrix pivoted_range_basis(const Matrix& m, int rank) {
  if (rank == 0) return Matrix(m.rows(), 0);
  Eigen::ColPivHouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ();
  Matrix basis = q.leftCols(rank);
  for (int c = 0; c < basis.cols(); ++c) {
    Eigen::Index row = 0;
    basis.col(c).cwiseAbs().maxCoeff(&row);
    const Complex pivot = basis(row, c);
    if (std::abs(pivot) > 0) basis.col(c) *= std::conj(pivot) / std::abs(pivot);
  }
  return basis;
}

}  // namespace

CornerBasis corner_basis(const Element& e, const ToleranceProfile& tol) {
  expect_projection(e, tol);
  CornerBasis cb{e.algebra(), e.algebra(), {}, {}};
  Signature corner_signature;
  for (int k = 0; k < e.block_count(); ++k) {
    const double tr = e.block(k).trace().real();
    const int rank = static_cast<int>(std::lround(tr));
    if (std::abs(tr - rank) > 0.1) fail("corner: projection has non-integral rank");
    cb.ranks.push_back(rank);
    cb.bases.push_back(pivoted_range_basis(e.block(k), rank));
    if (rank > 0) corner_signature.push_back(rank);
  }
  if (corner_signature.empty()) fail("corner: projection is zero");
  cb.corner = Algebra(corner_signature);
  return cb;
}

Element corner_compress(const CornerBasis& cb, const Element& x) {
  if (!(x.algebra() == cb.ambient)) fail("algebra mismatch");
  std::vector<Matrix> blocks;
  for (int k = 0; k < x.block_count(); ++k) {
    if (cb.ranks[static_cast<std::size_t>(k)] == 0) continue;
    const Matrix& basis = cb.bases[static_cast<std::size_t>(k)];
    blocks.push_back(basis.adjoint() * x.block(k) * basis);
  }
  return Element(cb.corner, std::move(blocks));
}

Element corner_embed(const CornerBasis& cb, const Element& corner_x) {
  if (!(corner_x.algebra() == cb.corner)) fail("algebra mismatch");
  std::vector<Matrix> blocks;
  int slot = 0;
  for (std::size_t k = 0; k < cb.ranks.size(); ++k) {
    const int n = cb.ambient.block_dim(static_cast<int>(k));
    if (cb.ranks[k] == 0) {
      blocks.push_back(Matrix::Zero(n, n));
    } else {
      const Matrix& basis = cb.bases[k];
      blocks.push_back(basis * corner_x.block(slot) * basis.adjoint());
      ++slot;
    }
  }
  return Element(cb.ambient, std::move(blocks));
}

Element corner(const Element& e, const Element& x, const ToleranceProfile& tol) {
  expect_same_algebra(e, x);
  const Element compressed_back = e * x * e;
  if ((x - compressed_back).operator_norm() >
      tol.order_tol * std::max(1.0, x.operator_norm())) {
    fail("corner: element not supported in the projection's corner");
  }
  return corner_compress(corner_basis(e, tol), x);
}

}  // namespace specord
