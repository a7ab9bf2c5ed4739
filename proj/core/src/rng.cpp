#include <specord/rng.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace specord {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

std::uint64_t Rng::next_u64() { return engine_(); }

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int Rng::uniform_int(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(next_u64() % span);
}

bool Rng::bernoulli(double p) { return uniform() < p; }

Rng Rng::substream(std::uint64_t index) const {
  return Rng(splitmix64(seed_ ^ splitmix64(index + 1)));
}

Element random_hermitian(const Algebra& algebra, Rng& rng) {
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<std::size_t>(algebra.block_count()));
  for (int k = 0; k < algebra.block_count(); ++k) {
    const int n = algebra.block_dim(k);
    Matrix a(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) a(r, c) = Complex(rng.normal(), rng.normal());
    }
    blocks.push_back(0.5 * (a + a.adjoint()));
  }
  return Element(algebra, std::move(blocks));
}

Matrix random_unitary_matrix(int n, Rng& rng) {
  Matrix a(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) a(r, c) = Complex(rng.normal(), rng.normal());
  }
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the diagonal phases so the distribution is Haar and the output is a
  // deterministic function of the input bits.
  for (int c = 0; c < n; ++c) {
    Complex d = r(c, c);
    const double mag = std::abs(d);
    q.col(c) *= (mag > 0) ? d / mag : Complex(1.0, 0.0);
  }
  return q;
}

Element random_unitary(const Algebra& algebra, Rng& rng) {
  std::vector<Matrix> blocks;
  for (int k = 0; k < algebra.block_count(); ++k) {
    blocks.push_back(random_unitary_matrix(algebra.block_dim(k), rng));
  }
  return Element(algebra, std::move(blocks));
}

Element random_projection(const Algebra& algebra, Rng& rng) {
  const Element h = random_hermitian(algebra, rng);
  const auto pairs = eig(h);
  const int total = static_cast<int>(pairs.size());
  const int rank = (total == 1) ? 1 : rng.uniform_int(1, total - 1);
  Element p = Element::zero(algebra);
  for (int i = 0; i < rank; ++i) p = p + pairs[static_cast<std::size_t>(i)].projector;
  return p.hermitized();
}

Element random_effect(const Algebra& algebra, Rng& rng) {
  const Element h = random_hermitian(algebra, rng);
  const double norm = h.operator_norm();
  if (norm == 0.0) return Element::zero(algebra);
  return 0.5 * ((1.0 / norm) * h + identity(algebra));
}

Element random_positive(const Algebra& algebra, Rng& rng) {
  const double scale = rng.uniform(0.2, 3.0);
  return scale * random_effect(algebra, rng);
}

Element random_central(const Algebra& algebra, Rng& rng) {
  std::vector<Matrix> blocks;
  for (int k = 0; k < algebra.block_count(); ++k) {
    const int n = algebra.block_dim(k);
    blocks.push_back(rng.normal() * Matrix::Identity(n, n));
  }
  return Element(algebra, std::move(blocks));
}

Element random_central_projection(const Algebra& algebra, Rng& rng) {
  std::vector<Matrix> blocks;
  bool any = false;
  for (int k = 0; k < algebra.block_count(); ++k) {
    const int n = algebra.block_dim(k);
    const bool on = rng.bernoulli();
    any = any || on;
    blocks.push_back(on ? Matrix(Matrix::Identity(n, n)) : Matrix(Matrix::Zero(n, n)));
  }
  Element z(algebra, std::move(blocks));
  if (!any) return identity(algebra);
  return z;
}

std::pair<Element, Element> random_orthogonal_pair(const Algebra& algebra, Rng& rng) {
  Rng u_rng = rng.substream(rng.next_u64());
  const Element u = random_unitary(algebra, u_rng);
  std::vector<Matrix> xb, yb;
  for (int k = 0; k < algebra.block_count(); ++k) {
    const int n = algebra.block_dim(k);
    Eigen::VectorXd dx = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd dy = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
      switch (rng.uniform_int(0, 2)) {
        case 0: dx(i) = rng.normal(); break;
        case 1: dy(i) = rng.normal(); break;
        default: break;
      }
    }
    const Matrix& uk = u.block(k);
    xb.push_back(uk * dx.cast<Complex>().asDiagonal() * uk.adjoint());
    yb.push_back(uk * dy.cast<Complex>().asDiagonal() * uk.adjoint());
  }
  return {Element(algebra, std::move(xb)).hermitized(),
          Element(algebra, std::move(yb)).hermitized()};
}

}  // namespace specord
