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

#ifndef S2NBAR_METADATA_HPP
#define S2NBAR_METADATA_HPP

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "s2nbar/axioms.hpp"
#include "s2nbar/grid.hpp"

namespace s2nbar {

inline constexpr std::size_t angle_grid_size = 23;   // H = W = 23 nodes, 5 km apart
inline constexpr double angle_grid_step_m = 5000.0;  // fixed grid spacing

enum class angle_kind : std::uint8_t { zenith = 0, azimuth = 1 };

/// Tile geocoding of the angle grid: upper-left corner in projected
/// coordinates plus the (fixed) 5 km node spacing.
struct tile_geocode {
    double ulx = 0;
    double uly = 0;
    int epsg = 0;
    double col_step_m = angle_grid_step_m;
    double row_step_m = angle_grid_step_m;
};

/// Unified sun + per-band angle array, 10 x 2 x 23 x 23, degrees.
/// Plane index 0 is the sun; 1..9 follow canonical band order. Missing nodes
/// are stored as NaN (the missing mask is NaN-ness).
class angle_grid {
   public:
    static constexpr std::size_t plane_count = band_count + 1;

    angle_grid();

    double& at(std::size_t plane, angle_kind a, std::size_t row, std::size_t col);
    double at(std::size_t plane, angle_kind a, std::size_t row, std::size_t col) const;

    grid2d<double>& plane(std::size_t plane, angle_kind a);
    const grid2d<double>& plane(std::size_t plane, angle_kind a) const;

    grid2d<double>& sun(angle_kind a) { return plane(0, a); }
    const grid2d<double>& sun(angle_kind a) const { return plane(0, a); }
    grid2d<double>& band(band_id b, angle_kind a) { return plane(1 + band_index(b), a); }
    const grid2d<double>& band(band_id b, angle_kind a) const {
        return plane(1 + band_index(b), a);
    }

    bool missing(std::size_t plane, angle_kind a, std::size_t row, std::size_t col) const;

    /// True when the band has no usable angles at all (absent from metadata).
    bool band_missing(band_id b) const;

   private:
    std::array<grid2d<double>, plane_count * 2> _planes;
};

/// Everything NBAR needs to know about one scene / timestep.
struct scene_metadata {
    angle_grid angles;
    tile_geocode geocode;
    double processing_baseline = 0;
    std::string scene_id;
};

/// One detector's 23x23 zenith/azimuth grids as read from MTD_TL.xml,
/// before aggregation. NaN marks missing cells.
struct detector_angles {
    grid2d<double> zenith;
    grid2d<double> azimuth;
};

/// Raw parse result of MTD_TL.xml: per-(band, detector) grids, the sun grids
/// and the tile geocode. Grids of non-convertible bands are already dropped.
struct raw_tile_angles {
    grid2d<double> sun_zenith;
    grid2d<double> sun_azimuth;
    std::map<std::pair<band_id, int>, detector_angles> detectors;
    tile_geocode geocode;
    std::string tile_id;
};

/// Extracts the processing baseline from MTD_MSIL2A.xml ("05.00" -> 5.0).
double parse_product_metadata(std::string_view xml_bytes);

/// Parses MTD_TL.xml: sun grids, per-detector viewing grids, geocode.
raw_tile_angles parse_tile_metadata(std::string_view xml_bytes);

/// Aggregates detector grids into the unified angle array: per node, the mean
/// of non-missing detector values; nodes missing everywhere are filled from
/// the nearest non-missing node (Euclidean in index space, ties to the
/// smallest row then column). Sun grids pass through unchanged. Bands with no
/// detector grids at all stay fully missing.
angle_grid merge_detectors(const raw_tile_angles& raw);

/// Projected coordinates of the 23 grid nodes: x[k] = ULX + k*5000,
/// y[k] = ULY - k*5000.
struct grid_node_axes {
    std::array<double, angle_grid_size> x;
    std::array<double, angle_grid_size> y;
};

grid_node_axes grid_node_coordinates(const tile_geocode& geocode);

}  // namespace s2nbar

#endif
