#include <benchmark/benchmark.h>

#include <specord/morphisms.hpp>

using namespace specord;

namespace {

Element sample_hermitian(const Algebra& algebra, std::uint64_t seed) {
  Rng rng(seed);
  return random_hermitian(algebra, rng);
}

void BM_EigClustered(benchmark::State& state) {
  const Algebra algebra({static_cast<int>(state.range(0))});
  const Element x = sample_hermitian(algebra, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eig(x));
  }
}
BENCHMARK(BM_EigClustered)->Arg(4)->Arg(8)->Arg(16);

void BM_MeetJoin(benchmark::State& state) {
  const Algebra algebra({static_cast<int>(state.range(0))});
  Rng rng(2);
  const Element p = random_projection(algebra, rng);
  const Element q = random_projection(algebra, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(meet(p, q));
    benchmark::DoNotOptimize(join(p, q));
  }
}
BENCHMARK(BM_MeetJoin)->Arg(4)->Arg(8)->Arg(16);

void BM_FamilyRoundTrip(benchmark::State& state) {
  const Algebra algebra({static_cast<int>(state.range(0))});
  const Element x = sample_hermitian(algebra, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(family_of(x).reconstruct());
  }
}
BENCHMARK(BM_FamilyRoundTrip)->Arg(4)->Arg(8);

void BM_SpectralSup(benchmark::State& state) {
  const Algebra algebra({static_cast<int>(state.range(0))});
  Rng rng(4);
  const std::vector<Element> xs = {random_hermitian(algebra, rng),
                                   random_hermitian(algebra, rng),
                                   random_hermitian(algebra, rng)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectral_sup(xs));
  }
}
BENCHMARK(BM_SpectralSup)->Arg(4)->Arg(8);

void BM_WignerReconstruct(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(5);
  const Matrix u = random_unitary_matrix(n, rng);
  const auto oracle = [&](const Matrix& p) { return Matrix(u * p * u.adjoint()); };
  for (auto _ : state) {
    benchmark::DoNotOptimize(wigner_reconstruct(n, oracle, 8, 7));
  }
}
BENCHMARK(BM_WignerReconstruct)->Arg(3)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
