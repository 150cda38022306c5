// Serial reference vs OpenMP kernels. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <vector>

#include "postcon/kernels.hpp"
#include "postcon/model.hpp"

using namespace postcon;

namespace {

template <bool Parallel>
void BM_InverseCdfDraws(benchmark::State& state) {
  std::vector<double> out(static_cast<std::size_t>(state.range(0)));
  const auto family = FamilySpec::cosine();
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::parallel::inverse_cdf_draws(family, Theta(7.0), 1, 0, out);
    } else {
      kernels::serial::inverse_cdf_draws(family, Theta(7.0), 1, 0, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_LogLikelihoodScan(benchmark::State& state) {
  const auto family = FamilySpec::cosine();
  const auto data = sample(family, Theta(0.0), 100, 3);
  std::vector<double> thetas(static_cast<std::size_t>(state.range(0)));
  for (std::size_t k = 0; k < thetas.size(); ++k) thetas[k] = 1e-3 * static_cast<double>(k);
  std::vector<double> out(thetas.size());
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::parallel::log_likelihood_scan(family, data.points, thetas, out);
    } else {
      kernels::serial::log_likelihood_scan(family, data.points, thetas, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_IntegerPeakScan(benchmark::State& state) {
  // Six points make acceptance essentially impossible below the bound, so the full range is scanned.
  const auto data = sample(FamilySpec::cosine(), Theta(0.0), 6, 5);
  const auto last = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    const auto r = Parallel ? kernels::parallel::integer_peak_scan(data.points, 0.01, 1, last)
                            : kernels::serial::integer_peak_scan(data.points, 0.01, 1, last);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_InverseCdfDraws<false>)->Name("inverse_cdf_draws/serial")->Arg(1 << 14)->Arg(1 << 17);
BENCHMARK(BM_InverseCdfDraws<true>)->Name("inverse_cdf_draws/omp")->Arg(1 << 14)->Arg(1 << 17);
BENCHMARK(BM_LogLikelihoodScan<false>)->Name("log_likelihood_scan/serial")->Arg(1 << 14)->Arg(1 << 17);
BENCHMARK(BM_LogLikelihoodScan<true>)->Name("log_likelihood_scan/omp")->Arg(1 << 14)->Arg(1 << 17);
BENCHMARK(BM_IntegerPeakScan<false>)->Name("integer_peak_scan/serial")->Arg(1 << 20);
BENCHMARK(BM_IntegerPeakScan<true>)->Name("integer_peak_scan/omp")->Arg(1 << 20);

BENCHMARK_MAIN();
