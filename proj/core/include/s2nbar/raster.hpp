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

#ifndef S2NBAR_RASTER_HPP
#define S2NBAR_RASTER_HPP

#include <array>
#include <cstdint>

#include "s2nbar/axioms.hpp"
#include "s2nbar/brdf.hpp"
#include "s2nbar/grid.hpp"
#include "s2nbar/metadata.hpp"

namespace s2nbar {

/// Axis-aligned geotransform: pixel (i, j) covers
/// [origin_x + i*pixel_w, ...] x [origin_y - (j+1)*pixel_h, ...]; sampling
/// uses pixel centers, origin + (i + 0.5) * step.
struct geo_transform {
    double origin_x = 0;
    double origin_y = 0;
    double pixel_w = 0;  // > 0
    double pixel_h = 0;  // > 0, applied as a negative y step
    int epsg = 0;

    double pixel_center_x(std::size_t i) const {
        return origin_x + (static_cast<double>(i) + 0.5) * pixel_w;
    }
    double pixel_center_y(std::size_t j) const {
        return origin_y - (static_cast<double>(j) + 0.5) * pixel_h;
    }

    bool operator==(const geo_transform&) const = default;
};

/// One band of integer-DN reflectance (scale 1/10000), georeferenced.
/// DN 0 is nodata.
struct band_raster {
    grid2d<std::uint16_t> data;
    geo_transform transform;
    std::uint16_t nodata = 0;
    band_id band = band_id::B02;
};

inline constexpr std::uint16_t nodata_dn = 0;

/// Processing-baseline harmonization of one DN: identity below PB 4.00,
/// otherwise subtract the 1000 DN offset and clamp to 1 so valid pixels can
/// never collide with the nodata code. Nodata passes through.
std::uint16_t harmonize_dn(std::uint16_t dn, double processing_baseline,
                           std::uint16_t nodata = nodata_dn);

/// Whole-raster harmonization.
void harmonize(grid2d<std::uint16_t>& data, double processing_baseline,
               std::uint16_t nodata = nodata_dn);

/// Per-pixel query coordinates expressed in the coarse grid's CRS.
struct query_points {
    grid2d<double> x;
    grid2d<double> y;
};

/// Coordinates of each target pixel center, reprojected into source_epsg.
/// Identity fast path when the codes match; otherwise both must be UTM.
query_points reproject_query_points(const geo_transform& target, std::size_t height,
                                    std::size_t width, int source_epsg);

/// Bilinear interpolation of one 23x23 coarse plane to a target raster whose
/// extent is in the same CRS as the geocode. Queries at pixel centers;
/// outside the node lattice the edge value extends (constant extrapolation).
grid2d<double> interp_bilinear(const grid2d<double>& coarse, const tile_geocode& geocode,
                               const geo_transform& target, std::size_t height,
                               std::size_t width);

/// Same, with precomputed query coordinates (the cross-CRS path).
grid2d<double> interp_bilinear(const grid2d<double>& coarse, const tile_geocode& geocode,
                               const query_points& at);

/// All present bands of a c-factor grid interpolated to one target shape.
struct interp_field {
    std::array<grid2d<double>, band_count> planes;
    std::array<bool, band_count> present{};
};

interp_field interp_bilinear(const cfactor_grid& coarse, const geo_transform& target,
                             std::size_t height, std::size_t width);

}  // namespace s2nbar

#endif
