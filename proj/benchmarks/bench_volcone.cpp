#include <benchmark/benchmark.h>

#include "volcone/bundle.hpp"
#include "volcone/class_parser.hpp"
#include "volcone/toric.hpp"
#include "volcone/volume.hpp"

using namespace volcone;

static void BM_ZariskiBl2(benchmark::State& state) {
  const auto g = builtin_geometry("bl2_p2");
  const auto d = parse_class("3H+E1-2E2", g);
  for (auto _ : state) benchmark::DoNotOptimize(zariski_decompose(g, d));
}
BENCHMARK(BM_ZariskiBl2);

static void BM_VolHirzebruch(benchmark::State& state) {
  const auto g = builtin_geometry("hirzebruch_" + std::to_string(state.range(0)));
  const auto d = g.make_class({Rational(3, 2), Rational(2)});
  for (auto _ : state) benchmark::DoNotOptimize(vol(g, d));
}
BENCHMARK(BM_VolHirzebruch)->Arg(1)->Arg(3)->Arg(7);

static void BM_CountSections(benchmark::State& state) {
  const auto t = toric::builtin_toric("bl1_p2");
  const auto coeffs = t.coefficients_for({Rational(2), Rational(-1, 2)});
  for (auto _ : state) benchmark::DoNotOptimize(toric::count_sections(t, coeffs, state.range(0)));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CountSections)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

static void BM_ChamberScan(benchmark::State& state) {
  const auto g = builtin_geometry("bl2_p2");
  const auto alpha = parse_class("3H", g);
  const auto beta = parse_class("-E1-2E2", g);
  for (auto _ : state) benchmark::DoNotOptimize(chamber_scan(g, alpha, beta, Rational(0), Rational(3)));
}
BENCHMARK(BM_ChamberScan);

static void BM_WolfeSurface(benchmark::State& state) {
  auto base = bundle::make_base("bl2_p2");
  const auto a = base->make_class({Rational(3), Rational(-1), Rational(-1)});
  const auto d = base->make_class({Rational(1), Rational(-1), Rational(0)});
  const auto m = bundle::make_model(base, a, d);
  for (auto _ : state) benchmark::DoNotOptimize(bundle::segment_plus(m, Rational(1, 3)));
}
BENCHMARK(BM_WolfeSurface);

BENCHMARK_MAIN();
