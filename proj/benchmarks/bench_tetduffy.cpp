#include <benchmark/benchmark.h>

#include "tetduffy/cubature.hpp"
#include "tetduffy/formulations.hpp"

using namespace tetduffy;

namespace {

Tetrahedron unit_tet() {
  return {{Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}}};
}
Tetrahedron face_tet() {
  return {{Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0.3, 0.4, -1.03}}};
}
Tetrahedron edge_tet() {
  return {{Vec3{0, 0, 0}, Vec3{0, 0, 1}, Vec3{-0.04, -1.09, -0.05},
           Vec3{0.3, -0.4, -1.09}}};
}

TetPair pair_for(int n_cv) {
  switch (n_cv) {
    case 4: return canonicalize_pair(unit_tet(), unit_tet());
    case 3: return canonicalize_pair(unit_tet(), face_tet());
    default: return canonicalize_pair(unit_tet(), edge_tet());
  }
}

std::pair<Polynomial, Kernel> efie() {
  FormulationSpec spec;
  spec.k = 10.0;
  spec.q_a = {0, 0, 1};
  spec.q_b = {0.3, -0.4, -1.09};
  return build_p_efie(spec);
}

void BM_BuildReducedEfie(benchmark::State& state) {
  TetPair pair = pair_for(static_cast<int>(state.range(0)));
  auto [P, K] = efie();
  for (auto _ : state) {
    auto ri = build_reduced(pair, P, K);
    benchmark::DoNotOptimize(ri);
  }
}
BENCHMARK(BM_BuildReducedEfie)->Arg(4)->Arg(3)->Arg(2);

void BM_BuildReducedMfie(benchmark::State& state) {
  TetPair pair = pair_for(static_cast<int>(state.range(0)));
  FormulationSpec spec;
  spec.k = 10.0;
  spec.q_a = {0, 0, 1};
  spec.q_b = {0.3, 0.4, -1.03};
  auto [P, K] = build_p_mfie(spec);
  for (auto _ : state) {
    auto ri = build_reduced(pair, P, K);
    benchmark::DoNotOptimize(ri);
  }
}
BENCHMARK(BM_BuildReducedMfie)->Arg(4)->Arg(2);

void BM_TensorIntegrate(benchmark::State& state) {
  const int n_cv = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  TetPair pair = pair_for(n_cv);
  auto [P, K] = efie();
  auto ri = build_reduced(pair, P, K);
  for (auto _ : state) {
    Complex v = tensor_integrate(ri, n, 1);
    benchmark::DoNotOptimize(v);
  }
  long long samples = 1;
  for (int d = 0; d < ri.y_dim(); ++d) samples *= n;
  state.SetItemsProcessed(state.iterations() * samples);
}
BENCHMARK(BM_TensorIntegrate)
    ->Args({4, 15})
    ->Args({4, 25})
    ->Args({4, 51})
    ->Args({3, 15})
    ->Args({3, 25})
    ->Args({2, 9})
    ->Args({2, 15});

void BM_EvalReduced(benchmark::State& state) {
  TetPair pair = pair_for(static_cast<int>(state.range(0)));
  auto [P, K] = efie();
  auto ri = build_reduced(pair, P, K);
  double y[4] = {0.37, 0.62, 0.18, 0.81};
  for (auto _ : state) {
    Complex v = ri.eval(y);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_EvalReduced)->Arg(4)->Arg(3)->Arg(2);

void BM_FirstIntegralHelmholtz(benchmark::State& state) {
  Kernel h = Kernel::helmholtz(10.0);
  Complex out[8];
  for (auto _ : state) {
    h.first_integrals(1, 8, 1.3, out);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_FirstIntegralHelmholtz);

void BM_CCRule(benchmark::State& state) {
  for (auto _ : state) {
    CCRule r = cc_rule(static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_CCRule)->Arg(15)->Arg(51)->Arg(129);

}  // namespace

BENCHMARK_MAIN();
