/*
   Copyright 2026 The s2nbar authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>

#include "s2nbar/geotiff.hpp"
#include "s2nbar/raster.hpp"
#include "s2nbar/utm.hpp"

using namespace s2nbar;

namespace {

grid2d<double> random_coarse() {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> val(0.8, 1.2);
    grid2d<double> g(angle_grid_size, angle_grid_size);
    for (double& v : g.values()) v = val(rng);
    return g;
}

void BM_Harmonize5490(benchmark::State& state) {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> dn(0, 12000);
    grid2d<std::uint16_t> base(5490, 5490);
    for (auto& v : base.values()) v = static_cast<std::uint16_t>(dn(rng));
    for (auto _ : state) {
        grid2d<std::uint16_t> work = base;
        harmonize(work, 5.0);
        benchmark::DoNotOptimize(work.data());
    }
}
BENCHMARK(BM_Harmonize5490)->Unit(benchmark::kMillisecond);

void BM_InterpToBand(benchmark::State& state) {
    const grid2d<double> coarse = random_coarse();
    tile_geocode geocode{600000.0, 5800020.0, 32632, 5000.0, 5000.0};
    geo_transform target{650000.0, 5750020.0, 10.0, 10.0, 32632};
    const std::size_t size = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(interp_bilinear(coarse, geocode, target, size, size));
    }
    state.SetItemsProcessed(int64_t(state.iterations()) * size * size);
}
BENCHMARK(BM_InterpToBand)->Arg(512)->Arg(1098)->Unit(benchmark::kMillisecond);

void BM_ReprojectQueryPoints(benchmark::State& state) {
    geo_transform target{191000.0, 5808000.0, 10.0, 10.0, 32633};
    const std::size_t size = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(reproject_query_points(target, size, size, 32632));
    }
    state.SetItemsProcessed(int64_t(state.iterations()) * size * size);
}
BENCHMARK(BM_ReprojectQueryPoints)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_GeotiffWriteRead(benchmark::State& state) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> dn(0, 12000);
    band_raster raster;
    raster.data = grid2d<std::uint16_t>(1024, 1024);
    for (auto& v : raster.data.values()) v = static_cast<std::uint16_t>(dn(rng));
    raster.transform = {600000.0, 5800020.0, 10.0, 10.0, 32632};

    const auto path = std::filesystem::temp_directory_path() / "s2nbar_bench.tif";
    const raster_format format =
        state.range(0) == 0 ? raster_format::gtiff : raster_format::cog;
    for (auto _ : state) {
        write_band_raster(raster, path, format);
        benchmark::DoNotOptimize(read_band_raster(path));
    }
    std::filesystem::remove(path);
}
BENCHMARK(BM_GeotiffWriteRead)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
