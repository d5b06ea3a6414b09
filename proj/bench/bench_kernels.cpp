#include <benchmark/benchmark.h>

#include <random>

#include "splinedict/dictionary.hpp"
#include "splinedict/kernels.hpp"

using namespace splinedict;

namespace {

const Dictionary& dict(int refine) {
  static const Dictionary d0 = build_dictionary({4, 0, 8, 6, 0});
  static const Dictionary d2 = build_dictionary({4, 0, 8, 6, 2});
  return refine == 0 ? d0 : d2;
}

template <auto Fn>
void BM_gram(benchmark::State& state) {
  const auto& d = dict(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(d.atoms()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.size() * d.size()));
}

template <auto Fn>
void BM_sample(benchmark::State& state) {
  const auto& d = dict(static_cast<int>(state.range(0)));
  const SampleGrid grid{0, 8, 7};
  for (auto _ : state) benchmark::DoNotOptimize(Fn(d.atoms(), grid));
}

template <auto Fn>
void BM_coherence(benchmark::State& state) {
  const auto& g = dict(static_cast<int>(state.range(0))).gram();
  for (auto _ : state) benchmark::DoNotOptimize(Fn(g, 200));
}

struct PursuitData {
  Eigen::MatrixXd B;
  Eigen::VectorXd q, numer, denom2;
  std::vector<char> excluded;
};

const PursuitData& pursuit_data() {
  static const PursuitData p = [] {
    PursuitData p;
    p.B = kernels::sample_parallel(dict(2).atoms(), SampleGrid{0, 8, 7});
    p.B.colwise().normalize();
    std::mt19937 rng(7);
    std::normal_distribution<double> z;
    p.q = Eigen::VectorXd::NullaryExpr(p.B.rows(), [&] { return z(rng); }).normalized();
    p.numer = p.B.transpose() * p.q;
    p.denom2 = p.B.colwise().squaredNorm().transpose();
    p.excluded.assign(static_cast<std::size_t>(p.B.cols()), 0);
    return p;
  }();
  return p;
}

template <auto Fn>
void BM_deflate(benchmark::State& state) {
  const auto& p = pursuit_data();
  Eigen::MatrixXd B = p.B;
  for (auto _ : state) {
    Fn(B, p.q, p.excluded);
    benchmark::ClobberMemory();
  }
}

template <auto Fn>
void BM_best_candidate(benchmark::State& state) {
  const auto& p = pursuit_data();
  const auto n = static_cast<std::size_t>(p.numer.size());
  for (auto _ : state)
    benchmark::DoNotOptimize(Fn({p.numer.data(), n}, {p.denom2.data(), n}, p.excluded, 1e-7));
}

}  // namespace

BENCHMARK(BM_gram<kernels::gram_serial>)->Name("gram/serial")->Arg(0)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_gram<kernels::gram_parallel>)->Name("gram/parallel")->Arg(0)->Arg(2)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_sample<kernels::sample_serial>)->Name("sample/serial")->Arg(0)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sample<kernels::sample_parallel>)->Name("sample/parallel")->Arg(0)->Arg(2)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_coherence<kernels::coherence_serial>)->Name("coherence/serial")->Arg(0)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_coherence<kernels::coherence_parallel>)->Name("coherence/parallel")->Arg(0)->Arg(2)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_deflate<kernels::deflate_serial>)->Name("deflate/serial")->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_deflate<kernels::deflate_parallel>)->Name("deflate/parallel")->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_best_candidate<kernels::best_candidate_serial>)->Name("best_candidate/serial")->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_best_candidate<kernels::best_candidate_parallel>)->Name("best_candidate/parallel")->Unit(benchmark::kMicrosecond)->UseRealTime();

BENCHMARK_MAIN();
