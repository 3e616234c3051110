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

#include "s2nbar/raster.hpp"

#include <algorithm>
#include <cmath>

#include "s2nbar/errors.hpp"
#include "s2nbar/utm.hpp"

namespace s2nbar {

std::uint16_t harmonize_dn(std::uint16_t dn, double processing_baseline, std::uint16_t nodata) {
    if (dn == nodata || processing_baseline < 4.0) return dn;
    return dn > 1001 ? static_cast<std::uint16_t>(dn - 1000) : std::uint16_t{1};
}

void harmonize(grid2d<std::uint16_t>& data, double processing_baseline, std::uint16_t nodata) {
    if (processing_baseline < 4.0) return;
    for (std::uint16_t& dn : data.values()) {
        if (dn == nodata) continue;
        dn = dn > 1001 ? static_cast<std::uint16_t>(dn - 1000) : std::uint16_t{1};
    }
}

namespace {

// Linear interpolation that reproduces the endpoints exactly and maps a
// constant pair to itself exactly (needed for the nadir identity to stay
// bit-exact through interpolation).
inline double lerp_exact(double a, double b, double t) {
    if (t == 0.0) return a;
    if (t == 1.0) return b;
    return a + t * (b - a);
}

// Bilinear sample of a plane at fractional node coordinates, clamped to the
// lattice (constant extrapolation beyond the edge nodes).
inline double sample_plane(const grid2d<double>& plane, double u, double v) {
    const double max_u = static_cast<double>(plane.cols() - 1);
    const double max_v = static_cast<double>(plane.rows() - 1);
    u = std::clamp(u, 0.0, max_u);
    v = std::clamp(v, 0.0, max_v);

    std::size_t c0 = static_cast<std::size_t>(u);
    std::size_t r0 = static_cast<std::size_t>(v);
    if (c0 >= plane.cols() - 1) c0 = plane.cols() - 2;
    if (r0 >= plane.rows() - 1) r0 = plane.rows() - 2;
    const double fu = u - static_cast<double>(c0);
    const double fv = v - static_cast<double>(r0);

    const double top = lerp_exact(plane(r0, c0), plane(r0, c0 + 1), fu);
    const double bot = lerp_exact(plane(r0 + 1, c0), plane(r0 + 1, c0 + 1), fu);
    return lerp_exact(top, bot, fv);
}

void check_coarse(const grid2d<double>& coarse) {
    if (coarse.rows() < 2 || coarse.cols() < 2) {
        fail(errc::empty_input, "coarse grid must be at least 2x2");
    }
}

}  // namespace

query_points reproject_query_points(const geo_transform& target, std::size_t height,
                                    std::size_t width, int source_epsg) {
    if (height == 0 || width == 0) {
        fail(errc::empty_target, "target shape is " + std::to_string(height) + "x" +
                                     std::to_string(width));
    }

    query_points out;
    out.x = grid2d<double>(height, width);
    out.y = grid2d<double>(height, width);

    if (target.epsg == source_epsg) {
        for (std::size_t j = 0; j < height; ++j) {
            const double y = target.pixel_center_y(j);
            for (std::size_t i = 0; i < width; ++i) {
                out.x(j, i) = target.pixel_center_x(i);
                out.y(j, i) = y;
            }
        }
        return out;
    }

    const utm_zone from = require_utm_zone(target.epsg);
    const utm_zone to = require_utm_zone(source_epsg);
    for (std::size_t j = 0; j < height; ++j) {
        const double y = target.pixel_center_y(j);
        for (std::size_t i = 0; i < width; ++i) {
            double lat, lon;
            utm_to_geographic(from, target.pixel_center_x(i), y, lat, lon);
            geographic_to_utm(to, lat, lon, out.x(j, i), out.y(j, i));
        }
    }
    return out;
}

grid2d<double> interp_bilinear(const grid2d<double>& coarse, const tile_geocode& geocode,
                               const geo_transform& target, std::size_t height,
                               std::size_t width) {
    check_coarse(coarse);
    if (height == 0 || width == 0) {
        fail(errc::empty_target, "target shape is " + std::to_string(height) + "x" +
                                     std::to_string(width));
    }
    if (target.epsg != geocode.epsg) {
        fail(errc::crs_mismatch, "target EPSG:" + std::to_string(target.epsg) +
                                     " differs from grid EPSG:" + std::to_string(geocode.epsg) +
                                     "; reproject the query points first");
    }

    grid2d<double> out(height, width);
    for (std::size_t j = 0; j < height; ++j) {
        const double v = (geocode.uly - target.pixel_center_y(j)) / geocode.row_step_m;
        for (std::size_t i = 0; i < width; ++i) {
            const double u = (target.pixel_center_x(i) - geocode.ulx) / geocode.col_step_m;
            out(j, i) = sample_plane(coarse, u, v);
        }
    }
    return out;
}

grid2d<double> interp_bilinear(const grid2d<double>& coarse, const tile_geocode& geocode,
                               const query_points& at) {
    check_coarse(coarse);
    if (at.x.size() == 0) fail(errc::empty_target, "no query points");

    grid2d<double> out(at.x.rows(), at.x.cols());
    for (std::size_t j = 0; j < out.rows(); ++j) {
        for (std::size_t i = 0; i < out.cols(); ++i) {
            const double u = (at.x(j, i) - geocode.ulx) / geocode.col_step_m;
            const double v = (geocode.uly - at.y(j, i)) / geocode.row_step_m;
            out(j, i) = sample_plane(coarse, u, v);
        }
    }
    return out;
}

interp_field interp_bilinear(const cfactor_grid& coarse, const geo_transform& target,
                             std::size_t height, std::size_t width) {
    interp_field out;
    for (band_id b : all_bands) {
        const std::size_t i = band_index(b);
        if (!coarse.present[i]) continue;
        out.planes[i] = interp_bilinear(coarse.values[i], coarse.geocode, target, height, width);
        out.present[i] = true;
    }
    return out;
}

}  // namespace s2nbar
