#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include <specord/algebra.hpp>

namespace specord {

// Deterministic random stream. All samples are derived from raw engine bits
// so that a fixed seed reproduces the same values on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  double uniform();                        // [0, 1)
  double uniform(double lo, double hi);
  double normal();                         // standard normal (Box-Muller)
  int uniform_int(int lo, int hi);         // inclusive bounds
  bool bernoulli(double p = 0.5);

  // Independent stream derived from (seed, index); trial loops draw one
  // substream per trial so results do not depend on evaluation order.
  Rng substream(std::uint64_t index) const;

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

Element random_hermitian(const Algebra& algebra, Rng& rng);
Matrix random_unitary_matrix(int n, Rng& rng);
Element random_unitary(const Algebra& algebra, Rng& rng);
Element random_projection(const Algebra& algebra, Rng& rng);  // proper when dim > 1
Element random_effect(const Algebra& algebra, Rng& rng);
Element random_positive(const Algebra& algebra, Rng& rng);
Element random_central(const Algebra& algebra, Rng& rng);
Element random_central_projection(const Algebra& algebra, Rng& rng);

// Disjoint diagonal supports conjugated by one random unitary; the two
// elements multiply to zero by construction.
std::pair<Element, Element> random_orthogonal_pair(const Algebra& algebra, Rng& rng);

}  // namespace specord
