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

#ifndef S2NBAR_BRDF_HPP
#define S2NBAR_BRDF_HPP

#include <array>
#include <span>
#include <string>

#include "s2nbar/axioms.hpp"
#include "s2nbar/grid.hpp"
#include "s2nbar/metadata.hpp"

namespace s2nbar {

/// Sun/view zeniths above this are treated as corrupt metadata: the LiSparse
/// secants blow up towards 90 degrees and Sentinel-2 geometry never gets
/// anywhere close.
inline constexpr double max_zenith_deg = 85.0;

double deg_to_rad(double degrees);

/// Wraps an angle to (-pi, pi].
double wrap_angle(double radians);

/// RossThick volumetric scattering kernel. Angles in radians; zeniths must
/// lie in [0, 85 deg].
double k_vol(double sun_zenith, double view_zenith, double rel_azimuth);

/// LiSparse geometric-optical kernel (h/b = 2, b/r = 1, cos t clamped to
/// [-1, 1]). Same domain as k_vol.
double k_geo(double sun_zenith, double view_zenith, double rel_azimuth);

/// Ross-Li BRDF: f_iso + f_vol * k_vol + f_geo * k_geo.
double brdf(const spectral_params& params, double kvol, double kgeo);

/// Scalar c-factor: modeled nadir-view BRDF over modeled observed BRDF at the
/// same sun zenith and relative azimuth.
double c_factor(const spectral_params& params, double sun_zenith, double view_zenith,
                double rel_azimuth);

/// Validated radian-domain view of an angle grid: sun zenith H x W, per-band
/// view zenith and relative azimuth (sun azimuth minus view azimuth, wrapped
/// to (-pi, pi]). Bands absent from the metadata have present=false and empty
/// planes.
struct angle_field {
    grid2d<double> sun_zenith;
    std::array<grid2d<double>, band_count> view_zenith;
    std::array<grid2d<double>, band_count> rel_azimuth;
    std::array<bool, band_count> present{};
};

angle_field make_angle_field(const angle_grid& grid);

/// Per-band kernel values on the 23x23 lattice.
struct kernel_field {
    std::array<grid2d<double>, band_count> kvol;
    std::array<grid2d<double>, band_count> kgeo;
    std::array<bool, band_count> present{};
};

kernel_field compute_kernels(const angle_field& angles);

/// Per-band coarse c-factor field with the geocoding it lives on.
struct cfactor_grid {
    std::array<grid2d<double>, band_count> values;
    std::array<bool, band_count> present{};
    tile_geocode geocode;

    bool has(band_id b) const { return present[band_index(b)]; }
    const grid2d<double>& values_for(band_id b) const;

    /// CSV export (band,row,col,c), canonical band order, %.12g cells.
    std::string to_csv() const;
};

/// Computes the c-factor for every band present in the metadata; bands whose
/// angle planes are entirely missing come out with present=false.
cfactor_grid c_factor_field(const scene_metadata& metadata);

/// Same, restricted to a band subset. Requesting a band whose angles are
/// missing throws missing_angles.
cfactor_grid c_factor_field(const scene_metadata& metadata, std::span<const band_id> bands);

}  // namespace s2nbar

#endif
