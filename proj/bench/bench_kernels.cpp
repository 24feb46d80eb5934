#include <benchmark/benchmark.h>

#include <random>

#include "precs/bosonic.hpp"
#include "precs/lindblad_field.hpp"
#include "precs/models.hpp"
#include "precs/precs.hpp"
#include "precs/reference.hpp"

using namespace precs;

namespace {

JointState bench_state(int n_max) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  Vector c = Vector::Zero(2 * n_max);
  for (int k = 0; k < 2; ++k)
    for (int xi = 0; xi < n_max / 2; ++xi) c(k * n_max + xi) = Complex(n(rng), n(rng));
  c.normalize();
  return JointState(n_max, c);
}

std::shared_ptr<const PhaseSpaceGrid> bench_grid(double h) {
  return std::make_shared<const PhaseSpaceGrid>(make_grid(6.0, h));
}

void BM_DecomposeParallel(benchmark::State& state) {
  const JointState psi = bench_state(20);
  const auto grid = bench_grid(0.05);
  for (auto _ : state) benchmark::DoNotOptimize(decompose(psi, grid));
  state.SetItemsProcessed(state.iterations() * grid->size());
}

void BM_DecomposeSerial(benchmark::State& state) {
  const JointState psi = bench_state(20);
  const auto grid = bench_grid(0.05);
  for (auto _ : state) benchmark::DoNotOptimize(reference::decompose(psi, grid));
  state.SetItemsProcessed(state.iterations() * grid->size());
}

void BM_IdentityResolutionParallel(benchmark::State& state) {
  const FockSpace fs(40);
  const PhaseSpaceGrid grid = make_grid(6.0, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(identity_resolution_error(fs, grid, 6));
}

void BM_IdentityResolutionSerial(benchmark::State& state) {
  const FockSpace fs(40);
  const PhaseSpaceGrid grid = make_grid(6.0, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(reference::identity_resolution_error(fs, grid, 6));
}

void BM_AssembleParallel(benchmark::State& state) {
  const ParametricField field = decompose(bench_state(20), bench_grid(0.1));
  const auto terms = interaction_terms(JaynesCummingsModel(1.0, 0.5));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_lindblad_field(field, terms));
}

void BM_AssembleSerial(benchmark::State& state) {
  const ParametricField field = decompose(bench_state(20), bench_grid(0.1));
  const auto terms = interaction_terms(JaynesCummingsModel(1.0, 0.5));
  for (auto _ : state) benchmark::DoNotOptimize(reference::assemble_lindblad_field(field, terms));
}

void BM_GkslRhsParallel(benchmark::State& state) {
  const LindbladField lf = assemble_lindblad_field(
      decompose(bench_state(20), bench_grid(0.05)), interaction_terms(JaynesCummingsModel(1.0, 0.5)));
  for (auto _ : state) benchmark::DoNotOptimize(gksl_rhs(lf));
}

void BM_GkslRhsSerial(benchmark::State& state) {
  const LindbladField lf = assemble_lindblad_field(
      decompose(bench_state(20), bench_grid(0.05)), interaction_terms(JaynesCummingsModel(1.0, 0.5)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::gksl_rhs(lf));
}

}  // namespace

BENCHMARK(BM_DecomposeParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DecomposeSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IdentityResolutionParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IdentityResolutionSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssembleParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssembleSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GkslRhsParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GkslRhsSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
