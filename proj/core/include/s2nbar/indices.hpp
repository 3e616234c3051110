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

#ifndef S2NBAR_INDICES_HPP
#define S2NBAR_INDICES_HPP

#include <string>
#include <string_view>
#include <vector>

#include "s2nbar/pipeline.hpp"

namespace s2nbar {

enum class index_id : std::uint8_t { ndvi, nirv, kndvi, ireci };

inline constexpr std::array<index_id, 4> all_indices = {index_id::ndvi, index_id::nirv,
                                                        index_id::kndvi, index_id::ireci};

std::string_view index_name(index_id idx);
index_id index_from_name(std::string_view name);

/// Bands an index consumes: NDVI/NIRv/kNDVI need {B08, B04}; IRECI needs
/// {B04, B05, B06, B07}.
std::vector<band_id> index_required_bands(index_id idx);

/// One index plane per timestep, |T| x H x W, NaN marking nodata.
struct index_slab {
    std::size_t times = 0;
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<double> values;

    double& at(std::size_t t, std::size_t y, std::size_t x) {
        return values[(t * height + y) * width + x];
    }
    double at(std::size_t t, std::size_t y, std::size_t x) const {
        return values[(t * height + y) * width + x];
    }
};

/// Elementwise index on a reflectance slab (physical scale; integer slabs
/// are converted DN/10000 on the fly). Nodata propagates; zero denominators
/// yield nodata. Throws missing_band when a required band is absent and
/// all_nodata when nothing at all is computable.
index_slab compute_index(const cube_slab& slab, index_id idx);

struct delta_psi_stats {
    std::size_t timestep = 0;
    double min = 0;  // NaN when the whole timestep is nodata
    double max = 0;
};

struct delta_psi_result {
    index_slab delta;
    std::vector<delta_psi_stats> stats;  // per timestep, NaN-aware min/max
};

/// Index-from-NBAR minus index-from-SR with per-timestep extremes.
delta_psi_result delta_psi(const index_slab& index_nbar, const index_slab& index_sr);

/// Stats serialization: "timestep,index,min,max" rows, %.12g cells.
std::string delta_psi_stats_csv(const std::vector<delta_psi_stats>& stats, index_id idx);

}  // namespace s2nbar

#endif
