#include <benchmark/benchmark.h>

#include "superconn/chern.hpp"
#include "superconn/correspondence.hpp"
#include "superconn/dsl.hpp"
#include "support/generators.hpp"

using namespace superconn;

namespace {

void BM_PolyProduct(benchmark::State& state) {
  Sampler rng(gen::kSeed);
  const Poly a = rng.poly(3, 3, 6), b = rng.poly(3, 3, 6);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_PolyProduct);

void BM_WedgeAndD(benchmark::State& state) {
  Sampler rng(gen::kSeed);
  const Form a = rng.mixed_form(3, 3), b = rng.mixed_form(3, 3);
  for (auto _ : state) benchmark::DoNotOptimize(ext_d(wedge(a, b)));
}
BENCHMARK(BM_WedgeAndD);

void BM_DecomposeDerivation(benchmark::State& state) {
  Sampler rng(gen::kSeed);
  const Christoffel G = gen::christoffel(rng, 3);
  const GeneratorAction act = gen::action(rng, 3, 1, 3);
  for (auto _ : state) benchmark::DoNotOptimize(decompose_derivation(act, G));
}
BENCHMARK(BM_DecomposeDerivation);

void BM_InduceAndCurvature(benchmark::State& state) {
  Sampler rng(gen::kSeed);
  const GradedConnection C = gen::graded_connection(rng, SuperRank(2, 1), 2);
  for (auto _ : state) benchmark::DoNotOptimize(sc_curvature(induce(C)));
}
BENCHMARK(BM_InduceAndCurvature);

void BM_CurvatureRelation(benchmark::State& state) {
  Sampler rng(gen::kSeed);
  const GradedConnection C = gen::graded_connection(rng, SuperRank(2, 1), 2);
  const EndForm N(SuperRank(2, 1), 2);
  for (auto _ : state) benchmark::DoNotOptimize(curvature_relation(C, N));
}
BENCHMARK(BM_CurvatureRelation);

/// Chern superform of degree 2k on a (2|1) bundle over a 2-chart.
void BM_ChernSuperform(benchmark::State& state) {
  Sampler rng(gen::kSeed);
  const GradedConnection C = gen::graded_connection(rng, SuperRank(2, 1), 2);
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(chern_superform(C, k, 2 * k));
}
BENCHMARK(BM_ChernSuperform)->Arg(1)->Arg(2);

void BM_Transgression(benchmark::State& state) {
  Sampler rng(gen::kSeed);
  const GradedConnection C0 = gen::graded_connection(rng, SuperRank(1, 1), 2);
  GradedConnection C1 = C0;
  C1.K0[0] += gen::tensor_value(rng, C0.rank(), 2, 0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(transgression(C0, C1, 2, 4));
}
BENCHMARK(BM_Transgression);

void BM_ParseSpec(benchmark::State& state) {
  const std::string text =
      "[chart]\nm = 2\ncoords = x y\n[bundle]\np = 1\nq = 1\n[Gamma]\nGamma[2][1][2] = x\n"
      "[omegaE]\nomegaE[1][1] = x dx(2)\nomegaE[2][2] = y^2 dx(1) - 1/2 x dx(2)\n"
      "[K1]\nK1[1][1][2] = x y\nK1[2][2][1] = dx(1,2)\n[N]\nN[1][2] = x + y\n";
  for (auto _ : state) benchmark::DoNotOptimize(dsl::parse_spec(text));
}
BENCHMARK(BM_ParseSpec);

}  // namespace

BENCHMARK_MAIN();
