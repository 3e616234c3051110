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

#include "s2nbar/brdf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "s2nbar/errors.hpp"

namespace s2nbar {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double max_zenith_rad = max_zenith_deg * pi / 180.0;

// A modeled BRDF below this is pathological geometry, not a real surface.
constexpr double degenerate_brdf_floor = 1e-8;

void check_zenith(double z, const char* which) {
    if (!(z >= 0.0 && z <= max_zenith_rad)) {
        fail(errc::domain_error, std::string(which) + " zenith " + std::to_string(z) +
                                     " rad outside [0, " + std::to_string(max_zenith_rad) + "]");
    }
}

void check_angles(double sun_zenith, double view_zenith, double rel_azimuth) {
    check_zenith(sun_zenith, "sun");
    check_zenith(view_zenith, "view");
    if (!std::isfinite(rel_azimuth)) {
        fail(errc::domain_error, "relative azimuth is not finite");
    }
}

}  // namespace

double deg_to_rad(double degrees) { return degrees * (pi / 180.0); }

double wrap_angle(double radians) {
    double y = std::fmod(radians + pi, 2.0 * pi);
    if (y <= 0.0) y += 2.0 * pi;
    return y - pi;
}

double k_vol(double sun_zenith, double view_zenith, double rel_azimuth) {
    check_angles(sun_zenith, view_zenith, rel_azimuth);
    // Floating-point drift can push |cos| a hair above 1; clamp before acos.
    const double cos_xi =
        std::clamp(std::cos(sun_zenith) * std::cos(view_zenith) +
                       std::sin(sun_zenith) * std::sin(view_zenith) * std::cos(rel_azimuth),
                   -1.0, 1.0);
    const double xi = std::acos(cos_xi);
    return ((pi / 2.0 - xi) * cos_xi + std::sin(xi)) /
               (std::cos(sun_zenith) + std::cos(view_zenith)) -
           pi / 4.0;
}

double k_geo(double sun_zenith, double view_zenith, double rel_azimuth) {
    check_angles(sun_zenith, view_zenith, rel_azimuth);
    const double hb = li_sparse_constants.h_over_b;
    const double br = li_sparse_constants.b_over_r;

    const double sun_p = std::atan(br * std::tan(sun_zenith));
    const double view_p = std::atan(br * std::tan(view_zenith));
    const double tan_sun = std::tan(sun_p);
    const double tan_view = std::tan(view_p);
    const double sec_sun = 1.0 / std::cos(sun_p);
    const double sec_view = 1.0 / std::cos(view_p);
    const double cos_phi = std::cos(rel_azimuth);
    const double sin_phi = std::sin(rel_azimuth);

    // D enters squared only; drift can make the radicand marginally negative.
    double d_sq = tan_sun * tan_sun + tan_view * tan_view - 2.0 * tan_sun * tan_view * cos_phi;
    if (d_sq < 0.0) d_sq = 0.0;

    const double cross = tan_sun * tan_view * sin_phi;
    const double cos_t =
        std::clamp(hb * std::sqrt(d_sq + cross * cross) / (sec_sun + sec_view), -1.0, 1.0);
    const double t = std::acos(cos_t);
    const double overlap = (t - std::sin(t) * cos_t) * (sec_sun + sec_view) / pi;

    const double cos_xi_p =
        std::clamp(std::cos(sun_p) * std::cos(view_p) +
                       std::sin(sun_p) * std::sin(view_p) * cos_phi,
                   -1.0, 1.0);
    return overlap - sec_sun - sec_view + 0.5 * (1.0 + cos_xi_p) * sec_sun * sec_view;
}

double brdf(const spectral_params& params, double kvol, double kgeo) {
    return params.f_iso + params.f_vol * kvol + params.f_geo * kgeo;
}

double c_factor(const spectral_params& params, double sun_zenith, double view_zenith,
                double rel_azimuth) {
    const double denom = brdf(params, k_vol(sun_zenith, view_zenith, rel_azimuth),
                              k_geo(sun_zenith, view_zenith, rel_azimuth));
    if (!(denom > degenerate_brdf_floor)) {
        fail(errc::degenerate_brdf, "modeled BRDF " + std::to_string(denom) + " is not positive");
    }
    const double numer = brdf(params, k_vol(sun_zenith, 0.0, rel_azimuth),
                              k_geo(sun_zenith, 0.0, rel_azimuth));
    return numer / denom;
}

angle_field make_angle_field(const angle_grid& grid) {
    angle_field out;
    const std::size_t n = angle_grid_size;
    out.sun_zenith = grid2d<double>(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const double zen_deg = grid.sun(angle_kind::zenith)(r, c);
            if (std::isnan(zen_deg)) {
                fail(errc::missing_angles, "sun zenith missing at node (" + std::to_string(r) +
                                               "," + std::to_string(c) + ")");
            }
            if (zen_deg > max_zenith_deg) {
                fail(errc::domain_error,
                     "sun zenith " + std::to_string(zen_deg) + " deg exceeds 85");
            }
            out.sun_zenith(r, c) = deg_to_rad(zen_deg);
        }
    }

    for (band_id b : all_bands) {
        const std::size_t i = band_index(b);
        if (grid.band_missing(b)) continue;
        out.view_zenith[i] = grid2d<double>(n, n);
        out.rel_azimuth[i] = grid2d<double>(n, n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                const double zen_deg = grid.band(b, angle_kind::zenith)(r, c);
                const double az_deg = grid.band(b, angle_kind::azimuth)(r, c);
                const double sun_az_deg = grid.sun(angle_kind::azimuth)(r, c);
                if (std::isnan(zen_deg) || std::isnan(az_deg) || std::isnan(sun_az_deg)) {
                    fail(errc::missing_angles,
                         std::string(band_name(b)) + " has missing angles at node (" +
                             std::to_string(r) + "," + std::to_string(c) + ")");
                }
                if (zen_deg > max_zenith_deg) {
                    fail(errc::domain_error, std::string(band_name(b)) + " view zenith " +
                                                 std::to_string(zen_deg) + " deg exceeds 85");
                }
                out.view_zenith[i](r, c) = deg_to_rad(zen_deg);
                out.rel_azimuth[i](r, c) = wrap_angle(deg_to_rad(sun_az_deg - az_deg));
            }
        }
        out.present[i] = true;
    }
    return out;
}

kernel_field compute_kernels(const angle_field& angles) {
    kernel_field out;
    const std::size_t n = angle_grid_size;
    for (std::size_t i = 0; i < band_count; ++i) {
        if (!angles.present[i]) continue;
        out.kvol[i] = grid2d<double>(n, n);
        out.kgeo[i] = grid2d<double>(n, n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                const double sz = angles.sun_zenith(r, c);
                const double vz = angles.view_zenith[i](r, c);
                const double ra = angles.rel_azimuth[i](r, c);
                out.kvol[i](r, c) = k_vol(sz, vz, ra);
                out.kgeo[i](r, c) = k_geo(sz, vz, ra);
            }
        }
        out.present[i] = true;
    }
    return out;
}

const grid2d<double>& cfactor_grid::values_for(band_id b) const {
    if (!has(b)) {
        fail(errc::missing_angles,
             std::string(band_name(b)) + " has no angle data in this scene");
    }
    return values[band_index(b)];
}

std::string cfactor_grid::to_csv() const {
    std::string out = "band,row,col,c\n";
    char line[96];
    for (band_id b : all_bands) {
        if (!has(b)) continue;
        const grid2d<double>& g = values[band_index(b)];
        for (std::size_t r = 0; r < g.rows(); ++r) {
            for (std::size_t c = 0; c < g.cols(); ++c) {
                std::snprintf(line, sizeof(line), "%s,%zu,%zu,%.12g\n",
                              std::string(band_name(b)).c_str(), r, c, g(r, c));
                out += line;
            }
        }
    }
    return out;
}

cfactor_grid c_factor_field(const scene_metadata& metadata) {
    std::vector<band_id> present;
    present.reserve(band_count);
    for (band_id b : all_bands) {
        if (!metadata.angles.band_missing(b)) present.push_back(b);
    }
    return c_factor_field(metadata, present);
}

cfactor_grid c_factor_field(const scene_metadata& metadata, std::span<const band_id> bands) {
    const angle_field angles = make_angle_field(metadata.angles);

    cfactor_grid out;
    out.geocode = metadata.geocode;
    const std::size_t n = angle_grid_size;
    for (band_id b : bands) {
        const std::size_t i = band_index(b);
        if (!angles.present[i]) {
            fail(errc::missing_angles,
                 std::string(band_name(b)) + " has no angle grids in the scene metadata");
        }
        const spectral_params& params = params_for(b);
        out.values[i] = grid2d<double>(n, n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                out.values[i](r, c) =
                    c_factor(params, angles.sun_zenith(r, c), angles.view_zenith[i](r, c),
                             angles.rel_azimuth[i](r, c));
            }
        }
        out.present[i] = true;
    }
    return out;
}

}  // namespace s2nbar
