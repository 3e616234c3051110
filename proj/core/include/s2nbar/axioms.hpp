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

#ifndef S2NBAR_AXIOMS_HPP
#define S2NBAR_AXIOMS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace s2nbar {

/// The Sentinel-2 MSI bands that undergo NBAR conversion. B01 (aerosols) and
/// B8A (narrow NIR) are deliberately not representable here.
enum class band_id : std::uint8_t {
    B02,  // blue
    B03,  // green
    B04,  // red
    B05,  // red edge 1
    B06,  // red edge 2
    B07,  // red edge 3
    B08,  // NIR
    B11,  // SWIR 1
    B12,  // SWIR 2
};

inline constexpr std::size_t band_count = 9;

inline constexpr std::array<band_id, band_count> all_bands = {
    band_id::B02, band_id::B03, band_id::B04, band_id::B05, band_id::B06,
    band_id::B07, band_id::B08, band_id::B11, band_id::B12,
};

constexpr std::size_t band_index(band_id b) { return static_cast<std::size_t>(b); }

std::string_view band_name(band_id b);

/// Parses "B02".."B12". Throws unknown_band_id for anything else, including
/// the non-convertible bands B01/B8A (those get a dedicated message).
band_id band_from_name(std::string_view name);

/// Maps the MTD_TL.xml bandId attribute (0..12, standard MSI ordering with
/// B8A at 8) to a convertible band, or nullopt for B01/B8A/B09/B10.
/// Values outside 0..12 throw unknown_band_id.
std::optional<band_id> band_from_msi_index(int msi_band_id);

/// MODIS-derived BRDF spectral model coefficients of one band plus its native
/// ground resolution.
struct spectral_params {
    double f_iso;
    double f_vol;
    double f_geo;
    int resolution_m;  // 10 or 20
};

/// Fixed Ross-Li kernel shape ratios.
struct kernel_constants {
    double h_over_b;
    double b_over_r;
};

inline constexpr kernel_constants li_sparse_constants = {2.0, 1.0};

/// Returns the compiled-in coefficient row for a band. Total over band_id.
const spectral_params& params_for(band_id b);

/// Central wavelengths (nm) per satellite, kept for documentation and audit
/// output only; no numeric path consumes them.
struct band_wavelengths {
    double s2a_nm;
    double s2b_nm;
};

const band_wavelengths& wavelengths_for(band_id b);

/// Serializes the coefficient table in canonical band order as CSV with
/// header "band,f_iso,f_geo,f_vol,resolution_m". Digit layout matches the
/// source table (four decimals).
std::string dump_constants_csv();

}  // namespace s2nbar

#endif
