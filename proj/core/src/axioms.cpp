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

#include "s2nbar/axioms.hpp"

#include <cstdio>

#include "s2nbar/errors.hpp"

namespace s2nbar {

const char* errc_name(errc code) {
    switch (code) {
        case errc::malformed_xml: return "MalformedXml";
        case errc::missing_field: return "MissingField";
        case errc::unparsable_baseline: return "UnparsableBaseline";
        case errc::grid_shape_mismatch: return "GridShapeMismatch";
        case errc::unknown_band_id: return "UnknownBandId";
        case errc::empty_input: return "EmptyInput";
        case errc::domain_error: return "DomainError";
        case errc::degenerate_brdf: return "DegenerateBrdf";
        case errc::missing_angles: return "MissingAngles";
        case errc::empty_target: return "EmptyTarget";
        case errc::crs_mismatch: return "CrsMismatch";
        case errc::unsupported_crs: return "UnsupportedCrs";
        case errc::io_error: return "IoError";
        case errc::unsupported_raster_layout: return "UnsupportedRasterLayout";
        case errc::missing_metadata: return "MissingMetadata";
        case errc::missing_band_raster: return "MissingBandRaster";
        case errc::no_metadata_asset: return "NoMetadataAsset";
        case errc::http_error: return "HttpError";
        case errc::malformed_item: return "MalformedItem";
        case errc::dimension_mismatch: return "DimensionMismatch";
        case errc::missing_band: return "MissingBand";
        case errc::all_nodata: return "AllNodata";
        case errc::usage_error: return "UsageError";
    }
    return "UnknownError";
}

namespace {

// Roy et al. coefficients for the nine convertible MSI bands, canonical order.
constexpr std::array<spectral_params, band_count> coefficient_table = {{
    {0.0774, 0.0372, 0.0079, 10},  // B02
    {0.1306, 0.0580, 0.0178, 10},  // B03
    {0.1690, 0.0574, 0.0227, 10},  // B04
    {0.2085, 0.0845, 0.0256, 20},  // B05
    {0.2316, 0.1003, 0.0273, 20},  // B06
    {0.2599, 0.1197, 0.0294, 20},  // B07
    {0.3093, 0.1535, 0.0330, 10},  // B08
    {0.3430, 0.1154, 0.0453, 20},  // B11
    {0.2658, 0.0639, 0.0387, 20},  // B12
}};

constexpr std::array<band_wavelengths, band_count> wavelength_table = {{
    {496.6, 492.1},    // B02
    {560.0, 559.0},    // B03
    {664.5, 665.0},    // B04
    {703.9, 703.8},    // B05
    {740.2, 739.1},    // B06
    {782.5, 779.7},    // B07
    {835.1, 833.0},    // B08
    {1613.7, 1610.4},  // B11
    {2202.4, 2185.7},  // B12
}};

constexpr std::array<std::string_view, band_count> band_names = {
    "B02", "B03", "B04", "B05", "B06", "B07", "B08", "B11", "B12",
};

}  // namespace

std::string_view band_name(band_id b) { return band_names[band_index(b)]; }

band_id band_from_name(std::string_view name) {
    for (band_id b : all_bands) {
        if (band_name(b) == name) return b;
    }
    if (name == "B01" || name == "B8A") {
        fail(errc::unknown_band_id, std::string(name) + " is not a convertible band");
    }
    fail(errc::unknown_band_id, "unrecognized band name '" + std::string(name) + "'");
}

std::optional<band_id> band_from_msi_index(int msi_band_id) {
    switch (msi_band_id) {
        case 1: return band_id::B02;
        case 2: return band_id::B03;
        case 3: return band_id::B04;
        case 4: return band_id::B05;
        case 5: return band_id::B06;
        case 6: return band_id::B07;
        case 7: return band_id::B08;
        case 11: return band_id::B11;
        case 12: return band_id::B12;
        case 0:   // B01
        case 8:   // B8A
        case 9:   // B09
        case 10:  // B10
            return std::nullopt;
        default:
            fail(errc::unknown_band_id, "bandId attribute " + std::to_string(msi_band_id) +
                                            " outside the MSI range 0..12");
    }
}

const spectral_params& params_for(band_id b) { return coefficient_table[band_index(b)]; }

const band_wavelengths& wavelengths_for(band_id b) { return wavelength_table[band_index(b)]; }

std::string dump_constants_csv() {
    std::string out = "band,f_iso,f_geo,f_vol,resolution_m\n";
    char line[80];
    for (band_id b : all_bands) {
        const spectral_params& p = params_for(b);
        std::snprintf(line, sizeof(line), "%s,%.4f,%.4f,%.4f,%d\n",
                      std::string(band_name(b)).c_str(), p.f_iso, p.f_geo, p.f_vol,
                      p.resolution_m);
        out += line;
    }
    return out;
}

}  // namespace s2nbar
