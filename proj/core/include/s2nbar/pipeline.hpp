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

#ifndef S2NBAR_PIPELINE_HPP
#define S2NBAR_PIPELINE_HPP

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "s2nbar/geotiff.hpp"
#include "s2nbar/raster.hpp"
#include "s2nbar/stac.hpp"

namespace s2nbar {

// ------------------------------------------------------------- SAFE path --

struct safe_options {
    raster_format format = raster_format::gtiff;
    std::vector<band_id> bands{all_bands.begin(), all_bands.end()};
    unsigned jobs = 0;  // 0: logical CPU count
};

struct band_report {
    band_id band;
    bool ok = false;
    std::filesystem::path output;  // empty when failed
    std::string error;             // empty when ok
};

struct safe_report {
    double processing_baseline = 0;
    std::vector<band_report> bands;  // order of the requested band list

    bool all_ok() const;
    bool any_ok() const;
};

/// Reads a scene's metadata, computes the coarse c-factor, then per band:
/// harmonize, interpolate to the band grid, multiply, round, and write to
/// <safe_dir>/NBAR/ under the input band file's base name. A band failure
/// aborts only that band and is recorded in the report.
safe_report nbar_safe(const std::filesystem::path& safe_dir, const safe_options& options = {});

/// Metadata loading shared by the SAFE and cube paths. source is a SAFE
/// directory, a local STAC item .json, or an http(s) URL to a STAC item.
scene_metadata load_scene_metadata(const std::string& source,
                                   const http_options& http = {});

// ------------------------------------------------------------- cube path --

struct cube_timestep {
    std::string datetime;                                  // ISO-8601
    std::string metadata_source;                           // SAFE dir | item .json | URL
    std::map<band_id, std::filesystem::path> band_rasters; // used by the manifest loader
};

struct cube_target {
    geo_transform transform;
    std::size_t height = 0;
    std::size_t width = 0;
};

struct cube_spec {
    std::vector<cube_timestep> timesteps;
    cube_target target;
    std::vector<band_id> bands;
    unsigned jobs = 0;
};

/// time x band x y x x slab. Carries either integer DN (nodata 0) or scaled
/// reflectance (nodata NaN); NBAR output keeps the input convention.
class cube_slab {
   public:
    cube_slab() = default;
    static cube_slab make_dn(std::size_t times, std::vector<band_id> bands, std::size_t height,
                             std::size_t width);
    static cube_slab make_real(std::size_t times, std::vector<band_id> bands,
                               std::size_t height, std::size_t width);

    bool integer_dn() const { return _integer; }
    std::size_t times() const { return _times; }
    std::size_t height() const { return _height; }
    std::size_t width() const { return _width; }
    const std::vector<band_id>& bands() const { return _bands; }
    std::size_t band_pos(band_id b) const;  // throws missing_band

    std::uint16_t& dn(std::size_t t, std::size_t b, std::size_t y, std::size_t x);
    std::uint16_t dn(std::size_t t, std::size_t b, std::size_t y, std::size_t x) const;
    double& real(std::size_t t, std::size_t b, std::size_t y, std::size_t x);
    double real(std::size_t t, std::size_t b, std::size_t y, std::size_t x) const;

    /// Value as scaled reflectance regardless of storage (DN/10000, nodata
    /// converted to NaN).
    double reflectance(std::size_t t, std::size_t b, std::size_t y, std::size_t x) const;

    const std::vector<double>& per_timestep_pb() const { return _pb; }
    std::vector<double>& per_timestep_pb() { return _pb; }

    bool same_shape(const cube_slab& other) const;

   private:
    std::size_t index(std::size_t t, std::size_t b, std::size_t y, std::size_t x) const;

    bool _integer = true;
    std::size_t _times = 0, _height = 0, _width = 0;
    std::vector<band_id> _bands;
    std::vector<std::uint16_t> _dn;
    std::vector<double> _real;
    std::vector<double> _pb;
};

struct timestep_report {
    std::string datetime;
    bool ok = false;
    double processing_baseline = 0;  // NaN when failed
    double c_min = 0, c_max = 0;     // over all bands and nodes; NaN when failed
    std::string error;
};

struct cube_report {
    std::vector<timestep_report> timesteps;
    bool all_ok() const;
    bool any_ok() const;
};

struct cube_result {
    cube_slab nbar;
    cube_report report;
};

/// NBAR for a whole slab: per timestep, fetch metadata, compute and
/// reproject/interpolate the c-factor to the target grid, harmonize with
/// that timestep's baseline and multiply. Timesteps whose metadata cannot be
/// obtained come out as all-nodata planes with a report entry; the pipeline
/// keeps going.
cube_result nbar_cube(const cube_spec& spec, const cube_slab& input,
                      const http_options& http = {});

/// Elementwise NBAR minus harmonized input in reflectance units; always a
/// real-valued slab, nodata propagates as NaN.
cube_slab delta_rho(const cube_slab& nbar, const cube_slab& harmonized);

// --------------------------------------------------------------- manifest --

/// Reads the cube manifest JSON: {"timesteps": [{"datetime", "metadata",
/// "bands": {"B04": "path", ...}}, ...], "target": {"epsg", "origin_x",
/// "origin_y", "pixel", "width", "height"}}. Relative paths resolve against
/// the manifest's directory.
cube_spec read_cube_manifest(const std::filesystem::path& path);

/// Loads every band raster named by the manifest into a DN slab; each raster
/// must already match the target grid shape.
cube_slab load_cube_slab(const cube_spec& spec);

}  // namespace s2nbar

#endif
