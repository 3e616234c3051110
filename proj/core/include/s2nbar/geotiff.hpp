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

// Single-band GeoTIFF reader/writer over a constrained TIFF 6.0 profile:
// little-endian, one sample per pixel (uint16 DN or float32), strip or tile
// layout, deflate or no compression, axis-aligned geotransform, EPSG via
// GeoKey 3072, nodata via the GDAL_NODATA tag. The COG variant is tiled
// 512x512 with deflate and 2/4/8 overviews, header and IFDs up front.

#ifndef S2NBAR_GEOTIFF_HPP
#define S2NBAR_GEOTIFF_HPP

#include <filesystem>

#include "s2nbar/raster.hpp"

namespace s2nbar {

enum class raster_format { gtiff, cog };

/// Reads a uint16 band raster. Throws io_error for missing/corrupt files and
/// unsupported_raster_layout for profiles outside the contract (rotated
/// transforms, multi-sample, unknown compression, float content).
band_raster read_band_raster(const std::filesystem::path& path);

/// Writes a band raster losslessly; round-trips bit-exactly through
/// read_band_raster. COG output has identical full-resolution content.
void write_band_raster(const band_raster& raster, const std::filesystem::path& path,
                       raster_format format = raster_format::gtiff);

/// Float32 single-band raster (QA exports: c-factor grids, index planes).
/// NaN is the nodata value.
struct float_raster {
    grid2d<float> data;
    geo_transform transform;
};

float_raster read_float_raster(const std::filesystem::path& path);
void write_float_raster(const float_raster& raster, const std::filesystem::path& path,
                        raster_format format = raster_format::gtiff);

}  // namespace s2nbar

#endif
