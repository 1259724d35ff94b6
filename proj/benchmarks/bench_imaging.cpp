#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <vector>

#include "emkm/forward.hpp"
#include "emkm/imaging.hpp"
#include "emkm/parallel.hpp"

using namespace emkm;
using namespace std::complex_literals;

namespace {

constexpr double kLambda = 0.125;
constexpr double kF0 = 2.4e9;

const MediumParams kVacuum{3.0e8, 1.0};

std::vector<Point3> plane_points(std::size_t n) {
  std::vector<Point3> pts;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      pts.push_back({(double(i) - n / 2.0) * kLambda / 4, (double(j) - n / 2.0) * kLambda / 4, 100 * kLambda});
  return pts;
}

ComplexMat3 alpha() { return {{2.0 + 1.0i, 1.0, 0.0, 1.0, 2.0 + 2.0i, 0.0, 0.0, 0.0, 0.5 + 0.5i}}; }

}  // namespace

static void BM_DyadicGreen(benchmark::State& state) {
  const Wavenumber k = Wavenumber::from_frequency(kF0, kVacuum);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Point3> ys(1024);
  for (auto& y : ys) y = {u(rng), u(rng), 10.0 + u(rng)};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dyadic_green({0.1, 0.2, 0.0}, ys[i++ & 1023], k));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_DyadicGreen);

static void BM_PointSpread(benchmark::State& state) {
  const auto array = make_square_array(20 * kLambda, static_cast<std::size_t>(state.range(0)));
  const Wavenumber k = Wavenumber::from_frequency(kF0, kVacuum);
  const Point3 y{0, 0, 100 * kLambda};
  for (auto _ : state) benchmark::DoNotOptimize(point_spread(y, y, k, array));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(array.size()));
}
BENCHMARK(BM_PointSpread)->Arg(10)->Arg(40);

static void BM_PassiveImageBand(benchmark::State& state) {
  set_thread_count(1);
  const auto array = make_square_array(20 * kLambda, 40);
  const auto band = make_band(kF0, 2.4e9, 5);
  const Dipole d{{0, 0, 100 * kLambda}, {{1.0 + 2.0i, 1.0 - 1.0i, 1.0 + 1.0i}}};
  const auto data = synthesize_passive(std::span(&d, 1), array, band, kVacuum);
  const auto pts = plane_points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    DiagonalPsf psf;
    benchmark::DoNotOptimize(passive_image_band(data, pts, band, array, kVacuum, &psf));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pts.size() * array.size() * band.size()));
}
BENCHMARK(BM_PassiveImageBand)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_ActiveImageBorn(benchmark::State& state) {
  set_thread_count(1);
  const auto array = make_square_array(20 * kLambda, 12);
  const auto band = make_band(kF0, 0.0, 1);
  std::vector<Scatterer> sc;
  const auto n = static_cast<int>(state.range(0));
  for (int i = 0; i < n; ++i) sc.push_back({{(i % 10) * kLambda / 4, (i / 10) * kLambda / 4, 100 * kLambda}, alpha()});
  const auto data = synthesize_active(sc, array, band, kVacuum);
  const auto pts = plane_points(8);
  for (auto _ : state) benchmark::DoNotOptimize(active_images(data, pts, array));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pts.size() * sc.size()));
}
BENCHMARK(BM_ActiveImageBorn)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_ActiveImageDense(benchmark::State& state) {
  set_thread_count(1);
  const auto array = make_square_array(20 * kLambda, static_cast<std::size_t>(state.range(0)));
  const auto band = make_band(kF0, 0.0, 1);
  const Scatterer s{{0, 0, 100 * kLambda}, alpha()};
  const auto data = add_noise(synthesize_active(std::span(&s, 1), array, band, kVacuum), 10.0, 1);
  const auto pts = plane_points(8);
  for (auto _ : state) benchmark::DoNotOptimize(active_images(data, pts, array));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pts.size()));
}
BENCHMARK(BM_ActiveImageDense)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
