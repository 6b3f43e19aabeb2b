#include <benchmark/benchmark.h>

#include <random>

#include "folcalc/cohomology.hpp"
#include "folcalc/geometries.hpp"
#include "folcalc/gotay.hpp"
#include "folcalc/kuranishi.hpp"
#include "folcalc/mapping_torus.hpp"
#include "folcalc/moser.hpp"
#include "folcalc/random_forms.hpp"
#include "folcalc/spectral.hpp"

using namespace folcalc;
using foliated::BigradedForm;
using trig::TrigPoly;

namespace {

void BM_TrigMultiply(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const int terms = static_cast<int>(state.range(0));
  TrigPoly a = random::random_trig(rng, 4, {3, terms, {}});
  TrigPoly b = random::random_trig(rng, 4, {3, terms, {}});
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_TrigMultiply)->Arg(2)->Arg(8)->Arg(32);

void BM_ExteriorDerivative(benchmark::State& state) {
  auto p = geometries::zambon_t4_twisted();
  std::mt19937_64 rng(2);
  BigradedForm f = random::random_form(rng, p.base(), 1, 1, {2, 3, {}}, 3);
  for (auto _ : state) benchmark::DoNotOptimize(foliated::exterior_d(f));
}
BENCHMARK(BM_ExteriorDerivative);

BigradedForm obstructed_beta(const foliated::BasePtr& base) {
  return BigradedForm::monomial(base, bit(0), TrigPoly::sin_axis(4, 0)) +
         BigradedForm::monomial(base, bit(1), TrigPoly::cos_axis(4, 1));
}

void BM_Lambda2(benchmark::State& state) {
  auto p = geometries::zambon_t4();
  BigradedForm beta = obstructed_beta(p.base());
  for (auto _ : state) benchmark::DoNotOptimize(kuranishi::lambda2(p, beta, beta));
}
BENCHMARK(BM_Lambda2);

void BM_Lambda2Oracle(benchmark::State& state) {
  auto p = geometries::zambon_t4();
  auto model = gotay::build_gotay(p);
  BigradedForm beta = obstructed_beta(p.base());
  for (auto _ : state) benchmark::DoNotOptimize(kuranishi::lambda2_oracle(model, beta, beta));
}
BENCHMARK(BM_Lambda2Oracle);

void BM_KuranishiVerdict(benchmark::State& state) {
  auto p = geometries::t3_example();
  TrigPoly c = TrigPoly::cos_axis(3, 1);
  BigradedForm beta = BigradedForm::monomial(p.base(), bit(0), trig::tp_pow(c, static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(kuranishi::kuranishi(p, beta));
}
BENCHMARK(BM_KuranishiVerdict)->Arg(2)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_DnuKernelFamily(benchmark::State& state) {
  std::vector<TrigPoly> gs;
  for (int n = 0; n <= 10; ++n) gs.push_back(trig::tp_pow(TrigPoly::cos_axis(3, 1), n));
  for (auto _ : state) {
    for (const auto& g : gs) benchmark::DoNotOptimize(cohom::dnu_kernel_test(g));
    benchmark::DoNotOptimize(cohom::class_independence(gs));
  }
}
BENCHMARK(BM_DnuKernelFamily)->Unit(benchmark::kMillisecond);

void BM_MoserProlong(benchmark::State& state) {
  auto p = geometries::t3_example();
  TrigPoly c = TrigPoly::cos_axis(3, 1);
  BigradedForm beta = BigradedForm::monomial(p.base(), bit(0), c * c);
  BigradedForm::Terms coords;
  coords[bit(2)] = c * Rational(2);
  coords[bit(0)] = -(c * c);
  BigradedForm ext = BigradedForm::from_coordinates(p.base(), coords);
  auto model = gotay::build_gotay(p);
  moser::ProlongOptions opt;
  opt.t_max = 0.02;
  opt.dt = 1e-3;
  opt.grid = gotay::GridSpec{{4, static_cast<int>(state.range(0)), 4}};
  opt.fit = false;
  for (auto _ : state) benchmark::DoNotOptimize(moser::prolong(model, beta, ext, opt));
}
BENCHMARK(BM_MoserProlong)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_SpectralDerivative(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  spectral::GridData f{{n, n}, std::vector<double>(static_cast<std::size_t>(n * n))};
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) f.values[static_cast<std::size_t>(j * n + i)] = std::sin(2 * M_PI * i / n) * std::cos(4 * M_PI * j / n);
  for (auto _ : state) benchmark::DoNotOptimize(spectral::derivative(f, 0));
}
BENCHMARK(BM_SpectralDerivative)->Arg(32)->Arg(128);

void BM_AnalyzeMatrix(benchmark::State& state) {
  mapping_torus::RationalMatrix a;
  for (auto row : {std::vector<long>{3, 1, 1, 1}, {1, 2, 1, 0}, {1, 1, 1, 0}, {1, 0, 0, 1}}) {
    a.emplace_back();
    for (long v : row) a.back().emplace_back(v);
  }
  for (auto _ : state) benchmark::DoNotOptimize(mapping_torus::analyze_matrix(a, {4.39, 0.2278}));
}
BENCHMARK(BM_AnalyzeMatrix);

}  // namespace

BENCHMARK_MAIN();
