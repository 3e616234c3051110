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

#include "s2nbar/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "s2nbar/brdf.hpp"
#include "s2nbar/errors.hpp"
#include "parallel.hpp"

namespace s2nbar {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// Harmonization offset in reflectance units for real-valued slabs
// (1000 DN at the 1/10000 scale).
constexpr double real_offset = 0.1;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(errc::io_error, "cannot open " + path.string());
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i]))) {
            return false;
        }
    }
    return true;
}

bool is_tif(const std::filesystem::path& p) {
    const std::string ext = p.extension().string();
    return iequals(ext, ".tif") || iequals(ext, ".tiff");
}

std::uint16_t nbar_dn(std::uint16_t harmonized, double c) {
    if (harmonized == nodata_dn) return nodata_dn;
    const long v = std::lround(c * harmonized);
    return static_cast<std::uint16_t>(std::clamp(v, 1l, 65535l));
}

// ---------------------------------------------------------------- SAFE IO --

std::filesystem::path find_granule_dir(const std::filesystem::path& safe_dir) {
    const std::filesystem::path granules = safe_dir / "GRANULE";
    std::vector<std::filesystem::path> candidates;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(granules, ec)) {
        if (entry.is_directory() && std::filesystem::exists(entry.path() / "MTD_TL.xml")) {
            candidates.push_back(entry.path());
        }
    }
    if (candidates.empty()) {
        fail(errc::missing_metadata, "no GRANULE/*/MTD_TL.xml under " + safe_dir.string());
    }
    std::sort(candidates.begin(), candidates.end());
    return candidates.front();
}

scene_metadata load_safe_metadata(const std::filesystem::path& safe_dir) {
    const std::filesystem::path product = safe_dir / "MTD_MSIL2A.xml";
    if (!std::filesystem::exists(product)) {
        fail(errc::missing_metadata, product.string() + " not found");
    }
    const double pb = parse_product_metadata(read_file(product));

    const std::filesystem::path granule = find_granule_dir(safe_dir);
    raw_tile_angles raw = parse_tile_metadata(read_file(granule / "MTD_TL.xml"));

    scene_metadata scene;
    scene.angles = merge_detectors(raw);
    scene.geocode = raw.geocode;
    scene.processing_baseline = pb;
    scene.scene_id = raw.tile_id.empty() ? safe_dir.filename().string() : raw.tile_id;
    return scene;
}

scene_metadata scene_from_stac(const stac_fetch_result& fetched, const std::string& source) {
    raw_tile_angles raw = parse_tile_metadata(fetched.granule_xml);
    scene_metadata scene;
    scene.angles = merge_detectors(raw);
    scene.geocode = raw.geocode;
    scene.processing_baseline = fetched.baseline;
    scene.scene_id = raw.tile_id.empty() ? source : raw.tile_id;
    return scene;
}

// Locates the band file below the granule's IMG_DATA (or the granule itself):
// a .tif whose stem carries the _Bxx token, preferring the native-resolution
// suffix, then the lexicographically first match for determinism.
std::filesystem::path find_band_raster(const std::filesystem::path& granule_dir, band_id b) {
    const std::string token = "_" + std::string(band_name(b));
    const std::string native =
        token + "_" + std::to_string(params_for(b).resolution_m) + "m";

    std::filesystem::path root = granule_dir / "IMG_DATA";
    if (!std::filesystem::exists(root)) root = granule_dir;

    std::vector<std::filesystem::path> exact, loose;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file() || !is_tif(entry.path())) continue;
        const std::string stem = entry.path().stem().string();
        if (stem.find(native) != std::string::npos) {
            exact.push_back(entry.path());
        } else if (stem.find(token) != std::string::npos) {
            loose.push_back(entry.path());
        }
    }
    auto& pool = exact.empty() ? loose : exact;
    if (pool.empty()) {
        fail(errc::missing_band_raster,
             "no raster for " + std::string(band_name(b)) + " under " + root.string());
    }
    std::sort(pool.begin(), pool.end());
    return pool.front();
}

}  // namespace

bool safe_report::all_ok() const {
    return std::all_of(bands.begin(), bands.end(), [](const band_report& b) { return b.ok; });
}

bool safe_report::any_ok() const {
    return std::any_of(bands.begin(), bands.end(), [](const band_report& b) { return b.ok; });
}

scene_metadata load_scene_metadata(const std::string& source, const http_options& http) {
    if (source.rfind("http://", 0) == 0 || source.rfind("https://", 0) == 0) {
        const std::string item = http_get(source, http);
        return scene_from_stac(fetch_stac_metadata(item, {}, http), source);
    }
    const std::filesystem::path path(source);
    if (std::filesystem::is_directory(path)) return load_safe_metadata(path);
    if (iequals(path.extension().string(), ".json")) {
        return scene_from_stac(
            fetch_stac_metadata(read_file(path), path.parent_path(), http), source);
    }
    fail(errc::missing_metadata,
         source + " is neither a SAFE directory, a STAC item .json, nor a URL");
}

safe_report nbar_safe(const std::filesystem::path& safe_dir, const safe_options& options) {
    if (options.bands.empty()) fail(errc::empty_input, "no bands requested");

    const scene_metadata scene = load_safe_metadata(safe_dir);
    const std::filesystem::path granule = find_granule_dir(safe_dir);
    const std::filesystem::path out_dir = safe_dir / "NBAR";
    std::filesystem::create_directories(out_dir);

    safe_report report;
    report.processing_baseline = scene.processing_baseline;
    report.bands.resize(options.bands.size());

    parallel_for(options.bands.size(), options.jobs, [&](std::size_t i) {
        const band_id b = options.bands[i];
        band_report& entry = report.bands[i];
        entry.band = b;
        try {
            const band_id one[] = {b};
            const cfactor_grid c = c_factor_field(scene, one);

            const std::filesystem::path src = find_band_raster(granule, b);
            band_raster raster = read_band_raster(src);
            raster.band = b;
            if (raster.transform.epsg != 0 && raster.transform.epsg != scene.geocode.epsg) {
                fail(errc::crs_mismatch,
                     src.string() + " is in EPSG:" + std::to_string(raster.transform.epsg) +
                         " but the tile is EPSG:" + std::to_string(scene.geocode.epsg));
            }

            harmonize(raster.data, scene.processing_baseline, raster.nodata);
            const grid2d<double> c_fine =
                interp_bilinear(c.values_for(b), c.geocode, raster.transform,
                                raster.data.rows(), raster.data.cols());
            for (std::size_t y = 0; y < raster.data.rows(); ++y) {
                for (std::size_t x = 0; x < raster.data.cols(); ++x) {
                    raster.data(y, x) = nbar_dn(raster.data(y, x), c_fine(y, x));
                }
            }

            const std::filesystem::path dst = out_dir / src.filename();
            write_band_raster(raster, dst, options.format);
            entry.output = dst;
            entry.ok = true;
        } catch (const std::exception& e) {
            entry.error = e.what();
        }
    });
    return report;
}

// -------------------------------------------------------------- cube slab --

cube_slab cube_slab::make_dn(std::size_t times, std::vector<band_id> bands, std::size_t height,
                             std::size_t width) {
    cube_slab s;
    s._integer = true;
    s._times = times;
    s._height = height;
    s._width = width;
    s._bands = std::move(bands);
    s._dn.assign(times * s._bands.size() * height * width, nodata_dn);
    s._pb.assign(times, nan);
    return s;
}

cube_slab cube_slab::make_real(std::size_t times, std::vector<band_id> bands,
                               std::size_t height, std::size_t width) {
    cube_slab s;
    s._integer = false;
    s._times = times;
    s._height = height;
    s._width = width;
    s._bands = std::move(bands);
    s._real.assign(times * s._bands.size() * height * width, nan);
    s._pb.assign(times, nan);
    return s;
}

std::size_t cube_slab::band_pos(band_id b) const {
    const auto it = std::find(_bands.begin(), _bands.end(), b);
    if (it == _bands.end()) {
        fail(errc::missing_band, std::string(band_name(b)) + " is not in the slab");
    }
    return static_cast<std::size_t>(it - _bands.begin());
}

std::size_t cube_slab::index(std::size_t t, std::size_t b, std::size_t y, std::size_t x) const {
    return ((t * _bands.size() + b) * _height + y) * _width + x;
}

std::uint16_t& cube_slab::dn(std::size_t t, std::size_t b, std::size_t y, std::size_t x) {
    return _dn[index(t, b, y, x)];
}
std::uint16_t cube_slab::dn(std::size_t t, std::size_t b, std::size_t y, std::size_t x) const {
    return _dn[index(t, b, y, x)];
}
double& cube_slab::real(std::size_t t, std::size_t b, std::size_t y, std::size_t x) {
    return _real[index(t, b, y, x)];
}
double cube_slab::real(std::size_t t, std::size_t b, std::size_t y, std::size_t x) const {
    return _real[index(t, b, y, x)];
}

double cube_slab::reflectance(std::size_t t, std::size_t b, std::size_t y,
                              std::size_t x) const {
    if (_integer) {
        const std::uint16_t v = dn(t, b, y, x);
        return v == nodata_dn ? nan : v / 10000.0;
    }
    return real(t, b, y, x);
}

bool cube_slab::same_shape(const cube_slab& other) const {
    return _times == other._times && _bands == other._bands && _height == other._height &&
           _width == other._width;
}

bool cube_report::all_ok() const {
    return std::all_of(timesteps.begin(), timesteps.end(),
                       [](const timestep_report& t) { return t.ok; });
}

bool cube_report::any_ok() const {
    return std::any_of(timesteps.begin(), timesteps.end(),
                       [](const timestep_report& t) { return t.ok; });
}

cube_result nbar_cube(const cube_spec& spec, const cube_slab& input,
                      const http_options& http) {
    if (spec.bands.empty()) fail(errc::empty_input, "no bands in the cube spec");
    if (input.times() != spec.timesteps.size() || input.bands() != spec.bands ||
        input.height() != spec.target.height || input.width() != spec.target.width) {
        fail(errc::dimension_mismatch, "slab dimensions do not match the cube spec");
    }

    cube_result out;
    out.nbar = input.integer_dn()
                   ? cube_slab::make_dn(input.times(), spec.bands, input.height(), input.width())
                   : cube_slab::make_real(input.times(), spec.bands, input.height(),
                                          input.width());
    out.report.timesteps.resize(spec.timesteps.size());

    const std::size_t h = input.height(), w = input.width();

    parallel_for(spec.timesteps.size(), spec.jobs, [&](std::size_t t) {
        timestep_report& entry = out.report.timesteps[t];
        entry.datetime = spec.timesteps[t].datetime;
        entry.processing_baseline = nan;
        entry.c_min = nan;
        entry.c_max = nan;
        try {
            const scene_metadata scene =
                load_scene_metadata(spec.timesteps[t].metadata_source, http);
            const cfactor_grid coarse = c_factor_field(scene, spec.bands);

            double c_min = std::numeric_limits<double>::infinity();
            double c_max = -std::numeric_limits<double>::infinity();
            for (band_id b : spec.bands) {
                for (double v : coarse.values_for(b).values()) {
                    c_min = std::min(c_min, v);
                    c_max = std::max(c_max, v);
                }
            }

            const query_points at =
                reproject_query_points(spec.target.transform, h, w, scene.geocode.epsg);

            const double pb = scene.processing_baseline;
            for (std::size_t bi = 0; bi < spec.bands.size(); ++bi) {
                const grid2d<double> c_fine =
                    interp_bilinear(coarse.values_for(spec.bands[bi]), coarse.geocode, at);
                for (std::size_t y = 0; y < h; ++y) {
                    for (std::size_t x = 0; x < w; ++x) {
                        if (input.integer_dn()) {
                            const std::uint16_t harmonized =
                                harmonize_dn(input.dn(t, bi, y, x), pb);
                            out.nbar.dn(t, bi, y, x) = nbar_dn(harmonized, c_fine(y, x));
                        } else {
                            const double v = input.real(t, bi, y, x);
                            const double harmonized =
                                (std::isnan(v) || pb < 4.0) ? v : v - real_offset;
                            out.nbar.real(t, bi, y, x) = harmonized * c_fine(y, x);
                        }
                    }
                }
            }

            out.nbar.per_timestep_pb()[t] = pb;
            entry.processing_baseline = pb;
            entry.c_min = c_min;
            entry.c_max = c_max;
            entry.ok = true;
        } catch (const std::exception& e) {
            entry.error = e.what();  // planes stay all-nodata
        }
    });
    return out;
}

cube_slab delta_rho(const cube_slab& nbar, const cube_slab& harmonized) {
    if (!nbar.same_shape(harmonized)) {
        fail(errc::dimension_mismatch, "delta_rho inputs have different shapes");
    }
    cube_slab out = cube_slab::make_real(nbar.times(), nbar.bands(), nbar.height(),
                                         nbar.width());
    out.per_timestep_pb() = nbar.per_timestep_pb();
    for (std::size_t t = 0; t < nbar.times(); ++t) {
        for (std::size_t b = 0; b < nbar.bands().size(); ++b) {
            for (std::size_t y = 0; y < nbar.height(); ++y) {
                for (std::size_t x = 0; x < nbar.width(); ++x) {
                    out.real(t, b, y, x) =
                        nbar.reflectance(t, b, y, x) - harmonized.reflectance(t, b, y, x);
                }
            }
        }
    }
    return out;
}

// --------------------------------------------------------------- manifest --

namespace {

using nlohmann::json;

[[noreturn]] void manifest_fail(const std::string& what) {
    fail(errc::usage_error, "cube manifest: " + what);
}

double require_number(const json& obj, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end() || !it->is_number()) {
        manifest_fail(std::string("missing numeric field '") + key + "'");
    }
    return it->get<double>();
}

}  // namespace

cube_spec read_cube_manifest(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::exception& e) {
        manifest_fail(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) manifest_fail("top level must be an object");

    const auto target_it = doc.find("target");
    if (target_it == doc.end() || !target_it->is_object()) {
        manifest_fail("missing 'target' object");
    }
    cube_spec spec;
    spec.target.transform.epsg = static_cast<int>(require_number(*target_it, "epsg"));
    spec.target.transform.origin_x = require_number(*target_it, "origin_x");
    spec.target.transform.origin_y = require_number(*target_it, "origin_y");
    const double pixel = require_number(*target_it, "pixel");
    if (!(pixel > 0)) manifest_fail("'pixel' must be positive");
    spec.target.transform.pixel_w = pixel;
    spec.target.transform.pixel_h = pixel;
    spec.target.width = static_cast<std::size_t>(require_number(*target_it, "width"));
    spec.target.height = static_cast<std::size_t>(require_number(*target_it, "height"));
    if (spec.target.width == 0 || spec.target.height == 0) {
        manifest_fail("target shape must be at least 1x1");
    }

    const auto steps_it = doc.find("timesteps");
    if (steps_it == doc.end() || !steps_it->is_array() || steps_it->empty()) {
        manifest_fail("missing non-empty 'timesteps' array");
    }

    for (const json& step : *steps_it) {
        cube_timestep ts;
        if (!step.is_object()) manifest_fail("timestep entries must be objects");
        const auto dt = step.find("datetime");
        if (dt == step.end() || !dt->is_string()) manifest_fail("timestep without 'datetime'");
        ts.datetime = dt->get<std::string>();
        const auto md = step.find("metadata");
        if (md == step.end() || !md->is_string()) manifest_fail("timestep without 'metadata'");
        ts.metadata_source = md->get<std::string>();
        const bool is_url = ts.metadata_source.rfind("http://", 0) == 0 ||
                            ts.metadata_source.rfind("https://", 0) == 0;
        if (!is_url && std::filesystem::path(ts.metadata_source).is_relative()) {
            ts.metadata_source = (path.parent_path() / ts.metadata_source).string();
        }
        const auto bands = step.find("bands");
        if (bands == step.end() || !bands->is_object() || bands->empty()) {
            manifest_fail("timestep without a non-empty 'bands' map");
        }
        for (const auto& [name, value] : bands->items()) {
            if (!value.is_string()) manifest_fail("band raster path must be a string");
            std::filesystem::path p(value.get<std::string>());
            if (p.is_relative()) p = path.parent_path() / p;
            ts.band_rasters[band_from_name(name)] = p;
        }
        spec.timesteps.push_back(std::move(ts));
    }

    // canonical band order from the first timestep; all must agree
    for (const auto& kv : spec.timesteps.front().band_rasters) spec.bands.push_back(kv.first);
    for (const cube_timestep& ts : spec.timesteps) {
        std::vector<band_id> got;
        for (const auto& kv : ts.band_rasters) got.push_back(kv.first);
        if (got != spec.bands) manifest_fail("all timesteps must list the same bands");
    }

    for (std::size_t i = 1; i < spec.timesteps.size(); ++i) {
        if (!(spec.timesteps[i - 1].datetime < spec.timesteps[i].datetime)) {
            manifest_fail("timesteps must be strictly increasing in datetime");
        }
    }
    return spec;
}

cube_slab load_cube_slab(const cube_spec& spec) {
    cube_slab slab = cube_slab::make_dn(spec.timesteps.size(), spec.bands, spec.target.height,
                                        spec.target.width);
    for (std::size_t t = 0; t < spec.timesteps.size(); ++t) {
        for (std::size_t bi = 0; bi < spec.bands.size(); ++bi) {
            const auto& path = spec.timesteps[t].band_rasters.at(spec.bands[bi]);
            const band_raster raster = read_band_raster(path);
            if (raster.data.rows() != spec.target.height ||
                raster.data.cols() != spec.target.width) {
                fail(errc::dimension_mismatch,
                     path.string() + " is " + std::to_string(raster.data.rows()) + "x" +
                         std::to_string(raster.data.cols()) + ", target is " +
                         std::to_string(spec.target.height) + "x" +
                         std::to_string(spec.target.width));
            }
            for (std::size_t y = 0; y < spec.target.height; ++y) {
                for (std::size_t x = 0; x < spec.target.width; ++x) {
                    slab.dn(t, bi, y, x) = raster.data(y, x);
                }
            }
        }
    }
    return slab;
}

}  // namespace s2nbar
