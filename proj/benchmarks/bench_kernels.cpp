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

#include <cmath>
#include <random>

#include "s2nbar/brdf.hpp"
#include "s2nbar/metadata.hpp"

using namespace s2nbar;

namespace {

// a fully populated scene: smooth sun field, two detectors per band
scene_metadata make_scene() {
    raw_tile_angles raw;
    raw.sun_zenith = grid2d<double>(angle_grid_size, angle_grid_size);
    raw.sun_azimuth = grid2d<double>(angle_grid_size, angle_grid_size);
    for (std::size_t r = 0; r < angle_grid_size; ++r) {
        for (std::size_t c = 0; c < angle_grid_size; ++c) {
            raw.sun_zenith(r, c) = 20.0 + 0.5 * double(r) + 0.1 * double(c);
            raw.sun_azimuth(r, c) = 120.0 + 1.5 * double(c);
        }
    }
    for (band_id b : all_bands) {
        for (int det = 1; det <= 2; ++det) {
            detector_angles angles;
            angles.zenith = grid2d<double>(angle_grid_size, angle_grid_size);
            angles.azimuth = grid2d<double>(angle_grid_size, angle_grid_size);
            for (std::size_t r = 0; r < angle_grid_size; ++r) {
                for (std::size_t c = 0; c < angle_grid_size; ++c) {
                    angles.zenith(r, c) = 3.0 + 0.2 * double(c) + 0.1 * det;
                    angles.azimuth(r, c) = 100.0 + 4.0 * double(r) - 2.0 * det;
                }
            }
            raw.detectors.emplace(std::make_pair(b, det), std::move(angles));
        }
    }
    raw.geocode = {600000.0, 5800020.0, 32632, 5000.0, 5000.0};

    scene_metadata scene;
    scene.angles = merge_detectors(raw);
    scene.geocode = raw.geocode;
    scene.processing_baseline = 5.0;
    return scene;
}

void BM_KVolScalar(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> zen(0.0, 1.4), phi(-3.0, 3.0);
    const double a = zen(rng), b = zen(rng), p = phi(rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(k_vol(a, b, p));
    }
}
BENCHMARK(BM_KVolScalar);

void BM_KGeoScalar(benchmark::State& state) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> zen(0.0, 1.4), phi(-3.0, 3.0);
    const double a = zen(rng), b = zen(rng), p = phi(rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(k_geo(a, b, p));
    }
}
BENCHMARK(BM_KGeoScalar);

void BM_CFactorScalar(benchmark::State& state) {
    const spectral_params& p = params_for(band_id::B04);
    for (auto _ : state) {
        benchmark::DoNotOptimize(c_factor(p, 0.5, 0.1, 1.0));
    }
}
BENCHMARK(BM_CFactorScalar);

void BM_MergeDetectors(benchmark::State& state) {
    raw_tile_angles raw;
    raw.sun_zenith = grid2d<double>(angle_grid_size, angle_grid_size, 30.0);
    raw.sun_azimuth = grid2d<double>(angle_grid_size, angle_grid_size, 150.0);
    for (band_id b : all_bands) {
        for (int det = 1; det <= 4; ++det) {
            detector_angles angles;
            angles.zenith = grid2d<double>(angle_grid_size, angle_grid_size, 4.0 + det);
            angles.azimuth = grid2d<double>(angle_grid_size, angle_grid_size, 100.0 + det);
            // punch NaN holes so the fill path is exercised
            for (std::size_t r = det; r < angle_grid_size; r += 5) {
                for (std::size_t c = 0; c < angle_grid_size; c += 3) {
                    angles.zenith(r, c) = std::nan("");
                }
            }
            raw.detectors.emplace(std::make_pair(b, det), std::move(angles));
        }
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(merge_detectors(raw));
    }
}
BENCHMARK(BM_MergeDetectors)->Unit(benchmark::kMicrosecond);

void BM_CFactorField(benchmark::State& state) {
    const scene_metadata scene = make_scene();
    for (auto _ : state) {
        benchmark::DoNotOptimize(c_factor_field(scene));
    }
}
BENCHMARK(BM_CFactorField)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
