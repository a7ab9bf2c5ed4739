#include <specord/lattice.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace specord {

namespace {

constexpr double kRankThreshold = 1e-7;

int exact_rank(const Matrix& p) {
  const double tr = p.trace().real();
  const int rank = static_cast<int>(std::lround(tr));
  if (std::abs(tr - rank) > 0.1) fail("projection: non-integral rank");
  return rank;
}

Matrix range_basis(const Matrix& p) {
  const int rank = exact_rank(p);
  if (rank == 0) return Matrix(p.rows(), 0);
  Eigen::ColPivHouseholderQR<Matrix> qr(p);
  Matrix q = qr.householderQ();
  Matrix basis = q.leftCols(rank);
  // canonical column phases: the largest entry of each column is real positive
  for (int c = 0; c < basis.cols(); ++c) {
    Eigen::Index row = 0;
    basis.col(c).cwiseAbs().maxCoeff(&row);
    const Complex pivot = basis(row, c);
    if (std::abs(pivot) > 0) basis.col(c) *= std::conj(pivot) / std::abs(pivot);
  }
  return basis;
}

}  // namespace

bool proj_leq(const Element& p, const Element& q, const ToleranceProfile& tol) {
  expect_same_algebra(p, q);
  expect_projection(p, tol);
  expect_projection(q, tol);
  return (p * q - p).operator_norm() <= tol.order_tol;
}

Element join_all(std::span<const Element> ps, const ToleranceProfile& tol) {
  if (ps.empty()) fail("join: empty projection set");
  const Algebra& algebra = ps.front().algebra();
  for (const Element& p : ps) {
    expect_same_algebra(ps.front(), p);
    expect_projection(p, tol);
  }

  std::vector<Matrix> blocks;
  for (int k = 0; k < algebra.block_count(); ++k) {
    const int n = algebra.block_dim(k);
    int cols = 0;
    std::vector<Matrix> bases;
    for (const Element& p : ps) {
      bases.push_back(range_basis(p.block(k)));
      cols += static_cast<int>(bases.back().cols());
    }
    if (cols == 0) {
      blocks.push_back(Matrix::Zero(n, n));
      continue;
    }
    Matrix stacked(n, cols);
    int at = 0;
    for (const Matrix& b : bases) {
      stacked.middleCols(at, static_cast<int>(b.cols())) = b;
      at += static_cast<int>(b.cols());
    }
    Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double cut = kRankThreshold * std::max(sv(0), 1.0);
    int rank = 0;
    while (rank < sv.size() && sv(rank) > cut) ++rank;
    const Matrix u = svd.matrixU().leftCols(rank);
    blocks.push_back(u * u.adjoint());
  }
  return Element(algebra, std::move(blocks)).hermitized();
}

Element join(const Element& p, const Element& q, const ToleranceProfile& tol) {
  const Element ps[] = {p, q};
  return join_all(ps, tol);
}

Element meet_all(std::span<const Element> ps, const ToleranceProfile& tol) {
  if (ps.empty()) fail("meet: empty projection set");
  std::vector<Element> complements;
  complements.reserve(ps.size());
  for (const Element& p : ps) complements.push_back(complement(p, tol));
  return complement(join_all(complements, tol), tol);
}

Element meet(const Element& p, const Element& q, const ToleranceProfile& tol) {
  const Element ps[] = {p, q};
  return meet_all(ps, tol);
}

Element complement(const Element& p, const ToleranceProfile& tol) {
  expect_projection(p, tol);
  return identity(p.algebra()) - p;
}

int projection_rank(const Element& p, const ToleranceProfile& tol) {
  expect_projection(p, tol);
  int rank = 0;
  for (int k = 0; k < p.block_count(); ++k) rank += exact_rank(p.block(k));
  return rank;
}

bool is_atomic(const Element& p, const ToleranceProfile& tol) {
  return projection_rank(p, tol) == 1;
}

bool is_central(const Element& z, const ToleranceProfile& tol) {
  const double scale = std::max(1.0, z.operator_norm());
  for (int k = 0; k < z.block_count(); ++k) {
    const int n = z.algebra().block_dim(k);
    const Complex mu = z.block(k).trace() / static_cast<double>(n);
    const Matrix delta = z.block(k) - mu * Matrix::Identity(n, n);
    if (delta.operatorNorm() > tol.order_tol * scale) return false;
  }
  return true;
}

std::optional<Element> central_proj_witness(const Element& z,
                                            const ToleranceProfile& tol) {
  expect_projection(z, tol);
  if (is_central(z, tol)) return std::nullopt;

  int worst_block = -1;
  double worst = -1.0;
  for (int k = 0; k < z.block_count(); ++k) {
    const int n = z.algebra().block_dim(k);
    const Complex mu = z.block(k).trace() / static_cast<double>(n);
    const double dev = Matrix(z.block(k) - mu * Matrix::Identity(n, n)).operatorNorm();
    if (dev > worst) {
      worst = dev;
      worst_block = k;
    }
  }

  const Matrix& zb = z.block(worst_block);
  const int n = static_cast<int>(zb.rows());
  const Matrix range = range_basis(zb);
  const Matrix kernel = range_basis(Matrix(Matrix::Identity(n, n) - zb));
  if (range.cols() == 0 || kernel.cols() == 0) {
    fail("central witness: offending block is scalar");
  }
  Eigen::VectorXcd v = range.col(0) + kernel.col(0);
  v.normalize();

  std::vector<Matrix> blocks;
  for (int k = 0; k < z.block_count(); ++k) {
    const int nk = z.algebra().block_dim(k);
    blocks.push_back(k == worst_block ? Matrix(v * v.adjoint())
                                      : Matrix::Zero(nk, nk));
  }
  return Element(z.algebra(), std::move(blocks));
}

}  // namespace specord
