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

// nbar: Sentinel-2 L2A surface reflectance to NBAR, on SAFE scenes and on
// time-series cubes. Exit codes: 0 success, 1 fatal, 2 partial failure,
// 64 usage error.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "s2nbar/brdf.hpp"
#include "s2nbar/errors.hpp"
#include "s2nbar/geotiff.hpp"
#include "s2nbar/indices.hpp"
#include "s2nbar/pipeline.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_fatal = 1;
constexpr int exit_partial = 2;
constexpr int exit_usage = 64;

using s2nbar::band_id;

std::vector<band_id> parse_band_list(const std::vector<std::string>& names) {
    std::vector<band_id> out;
    for (const std::string& n : names) out.push_back(s2nbar::band_from_name(n));
    return out;
}

unsigned resolve_jobs(unsigned from_flag) {
    if (from_flag > 0) return from_flag;
    if (const char* env = std::getenv("NBAR_JOBS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end == env || *end != '\0' || v == 0) {
            s2nbar::fail(s2nbar::errc::usage_error,
                         std::string("NBAR_JOBS is not a positive integer: ") + env);
        }
        return static_cast<unsigned>(v);
    }
    return 0;  // library default: logical CPU count
}

std::string sanitize_timestamp(std::string ts) {
    for (char& c : ts) {
        if (c == ':') c = '-';
    }
    return ts;
}

// ------------------------------------------------------------------- safe --

int run_safe(const std::string& safe_dir, const std::string& format,
             const std::vector<std::string>& bands, unsigned jobs) {
    s2nbar::safe_options options;
    options.format = format == "cog" ? s2nbar::raster_format::cog : s2nbar::raster_format::gtiff;
    if (!bands.empty()) options.bands = parse_band_list(bands);
    options.jobs = resolve_jobs(jobs);

    const s2nbar::safe_report report = s2nbar::nbar_safe(safe_dir, options);
    for (const s2nbar::band_report& b : report.bands) {
        if (b.ok) {
            std::printf("%s %s pb=%.2f\n", std::string(s2nbar::band_name(b.band)).c_str(),
                        b.output.c_str(), report.processing_baseline);
        } else {
            std::fprintf(stderr, "%s ERROR %s\n",
                         std::string(s2nbar::band_name(b.band)).c_str(), b.error.c_str());
        }
    }
    if (report.all_ok()) return exit_ok;
    return report.any_ok() ? exit_partial : exit_fatal;
}

// ------------------------------------------------------------------- cube --

int run_cube(const std::string& manifest, const std::string& out_dir, unsigned jobs) {
    s2nbar::cube_spec spec = s2nbar::read_cube_manifest(manifest);
    spec.jobs = resolve_jobs(jobs);
    const s2nbar::cube_slab input = s2nbar::load_cube_slab(spec);
    const s2nbar::cube_result result = s2nbar::nbar_cube(spec, input);

    std::filesystem::create_directories(out_dir);
    nlohmann::json report_json;
    report_json["timesteps"] = nlohmann::json::array();

    for (std::size_t t = 0; t < spec.timesteps.size(); ++t) {
        const s2nbar::timestep_report& entry = result.report.timesteps[t];
        nlohmann::json j;
        j["datetime"] = entry.datetime;
        j["ok"] = entry.ok;
        j["error"] = entry.error;
        if (entry.ok) {
            j["processing_baseline"] = entry.processing_baseline;
            j["c_min"] = entry.c_min;
            j["c_max"] = entry.c_max;
        }
        nlohmann::json outputs = nlohmann::json::object();
        if (entry.ok) {
            for (std::size_t bi = 0; bi < spec.bands.size(); ++bi) {
                const band_id b = spec.bands[bi];
                s2nbar::band_raster raster;
                raster.band = b;
                raster.transform = spec.target.transform;
                raster.data =
                    s2nbar::grid2d<std::uint16_t>(spec.target.height, spec.target.width);
                for (std::size_t y = 0; y < spec.target.height; ++y) {
                    for (std::size_t x = 0; x < spec.target.width; ++x) {
                        raster.data(y, x) = result.nbar.dn(t, bi, y, x);
                    }
                }
                const std::string name = sanitize_timestamp(entry.datetime) + "_" +
                                         std::string(s2nbar::band_name(b)) + ".tif";
                s2nbar::write_band_raster(raster, std::filesystem::path(out_dir) / name);
                outputs[std::string(s2nbar::band_name(b))] = name;  // relative: reports
                                                                    // stay relocatable
            }
        }
        j["outputs"] = outputs;
        report_json["timesteps"].push_back(j);
    }

    const std::filesystem::path report_path = std::filesystem::path(out_dir) / "report.json";
    std::ofstream f(report_path);
    f << report_json.dump(2) << "\n";
    if (!f) s2nbar::fail(s2nbar::errc::io_error, "cannot write " + report_path.string());

    for (const s2nbar::timestep_report& entry : result.report.timesteps) {
        if (!entry.ok) std::fprintf(stderr, "%s ERROR %s\n", entry.datetime.c_str(),
                                    entry.error.c_str());
    }
    return result.report.all_ok() ? exit_ok : exit_partial;
}

// ---------------------------------------------------------------- kernels --

int run_kernels(double sun_deg, double view_deg, double az_deg, const std::string& band) {
    const double sz = s2nbar::deg_to_rad(sun_deg);
    const double vz = s2nbar::deg_to_rad(view_deg);
    const double ra = s2nbar::wrap_angle(s2nbar::deg_to_rad(az_deg));

    const double kvol = s2nbar::k_vol(sz, vz, ra);
    const double kgeo = s2nbar::k_geo(sz, vz, ra);
    if (band.empty()) {
        std::printf("%.12g,%.12g\n", kvol, kgeo);
    } else {
        const s2nbar::spectral_params& p = s2nbar::params_for(s2nbar::band_from_name(band));
        std::printf("%.12g,%.12g,%.12g,%.12g\n", kvol, kgeo, s2nbar::brdf(p, kvol, kgeo),
                    s2nbar::c_factor(p, sz, vz, ra));
    }
    return exit_ok;
}

// --------------------------------------------------------------- c-factor --

int run_cfactor(const std::string& safe_dir, const std::string& csv_path,
                const std::string& tiff_dir, const std::vector<std::string>& bands) {
    const s2nbar::scene_metadata scene = s2nbar::load_scene_metadata(safe_dir);
    const s2nbar::cfactor_grid c =
        bands.empty() ? s2nbar::c_factor_field(scene)
                      : s2nbar::c_factor_field(scene, parse_band_list(bands));

    if (!tiff_dir.empty()) {
        std::filesystem::create_directories(tiff_dir);
        for (band_id b : s2nbar::all_bands) {
            if (!c.has(b)) continue;
            s2nbar::float_raster raster;
            raster.data = s2nbar::grid2d<float>(s2nbar::angle_grid_size,
                                                s2nbar::angle_grid_size);
            const auto& src = c.values_for(b);
            for (std::size_t r = 0; r < src.rows(); ++r) {
                for (std::size_t col = 0; col < src.cols(); ++col) {
                    raster.data(r, col) = static_cast<float>(src(r, col));
                }
            }
            // node k sits at ULX + k*5000; as 5 km pixels that means the
            // area origin is shifted half a step up-left
            raster.transform.origin_x = c.geocode.ulx - c.geocode.col_step_m / 2;
            raster.transform.origin_y = c.geocode.uly + c.geocode.row_step_m / 2;
            raster.transform.pixel_w = c.geocode.col_step_m;
            raster.transform.pixel_h = c.geocode.row_step_m;
            raster.transform.epsg = c.geocode.epsg;
            s2nbar::write_float_raster(
                raster, std::filesystem::path(tiff_dir) /
                            ("c_" + std::string(s2nbar::band_name(b)) + ".tif"));
        }
    }
    if (tiff_dir.empty() || !csv_path.empty()) {
        const std::string csv = c.to_csv();
        if (csv_path.empty() || csv_path == "-") {
            std::fwrite(csv.data(), 1, csv.size(), stdout);
        } else {
            std::ofstream f(csv_path, std::ios::binary);
            f << csv;
            if (!f) s2nbar::fail(s2nbar::errc::io_error, "cannot write " + csv_path);
        }
    }
    return exit_ok;
}

// ---------------------------------------------------------------- indices --

void write_index_plane(const s2nbar::index_slab& slab, std::size_t t,
                       const s2nbar::geo_transform& transform,
                       const std::filesystem::path& path) {
    s2nbar::float_raster raster;
    raster.transform = transform;
    raster.data = s2nbar::grid2d<float>(slab.height, slab.width);
    for (std::size_t y = 0; y < slab.height; ++y) {
        for (std::size_t x = 0; x < slab.width; ++x) {
            raster.data(y, x) = static_cast<float>(slab.at(t, y, x));
        }
    }
    s2nbar::write_float_raster(raster, path);
}

int run_indices(const std::string& nbar_manifest, const std::string& sr_manifest,
                const std::string& out_dir, const std::vector<std::string>& index_names) {
    const s2nbar::cube_spec nbar_spec = s2nbar::read_cube_manifest(nbar_manifest);
    const s2nbar::cube_spec sr_spec = s2nbar::read_cube_manifest(sr_manifest);
    const s2nbar::cube_slab nbar = s2nbar::load_cube_slab(nbar_spec);
    const s2nbar::cube_slab sr = s2nbar::load_cube_slab(sr_spec);

    std::vector<s2nbar::index_id> indices;
    if (index_names.empty()) {
        // default: whatever the manifests' band set can feed
        for (s2nbar::index_id idx : s2nbar::all_indices) {
            bool ok = true;
            for (band_id b : s2nbar::index_required_bands(idx)) {
                if (std::find(nbar_spec.bands.begin(), nbar_spec.bands.end(), b) ==
                        nbar_spec.bands.end() ||
                    std::find(sr_spec.bands.begin(), sr_spec.bands.end(), b) ==
                        sr_spec.bands.end()) {
                    ok = false;
                }
            }
            if (ok) indices.push_back(idx);
        }
        if (indices.empty()) {
            s2nbar::fail(s2nbar::errc::missing_band,
                         "manifests lack the bands for every supported index");
        }
    } else {
        for (const std::string& n : index_names) indices.push_back(s2nbar::index_from_name(n));
    }

    std::filesystem::create_directories(out_dir);
    std::string stats_csv = "timestep,index,min,max\n";
    for (s2nbar::index_id idx : indices) {
        const s2nbar::index_slab a = s2nbar::compute_index(nbar, idx);
        const s2nbar::index_slab b = s2nbar::compute_index(sr, idx);
        const s2nbar::delta_psi_result d = s2nbar::delta_psi(a, b);
        stats_csv += s2nbar::delta_psi_stats_csv(d.stats, idx);

        for (std::size_t t = 0; t < a.times; ++t) {
            const std::string ts = sanitize_timestamp(nbar_spec.timesteps[t].datetime);
            const std::string base = ts + "_" + std::string(s2nbar::index_name(idx));
            const auto dir = std::filesystem::path(out_dir);
            write_index_plane(a, t, nbar_spec.target.transform, dir / (base + "_nbar.tif"));
            write_index_plane(b, t, sr_spec.target.transform, dir / (base + "_sr.tif"));
            write_index_plane(d.delta, t, nbar_spec.target.transform,
                              dir / (base + "_delta.tif"));
        }
    }

    const std::filesystem::path stats_path =
        std::filesystem::path(out_dir) / "delta_psi_stats.csv";
    std::ofstream f(stats_path, std::ios::binary);
    f << stats_csv;
    if (!f) s2nbar::fail(s2nbar::errc::io_error, "cannot write " + stats_path.string());
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sentinel-2 L2A surface reflectance to nadir BRDF-adjusted reflectance"};
    app.require_subcommand(1);

    // safe
    std::string safe_dir, safe_format = "gtiff";
    std::vector<std::string> safe_bands;
    unsigned safe_jobs = 0;
    CLI::App* safe = app.add_subcommand("safe", "convert one SAFE scene; outputs under NBAR/");
    safe->add_option("safe_dir", safe_dir, "SAFE directory")->required();
    safe->add_option("--format", safe_format, "gtiff or cog")
        ->check(CLI::IsMember({"gtiff", "cog"}));
    safe->add_option("--bands", safe_bands, "band subset, e.g. B04,B08")->delimiter(',');
    safe->add_option("--jobs", safe_jobs, "worker count (default: CPUs, or NBAR_JOBS)");

    // cube
    std::string cube_manifest, cube_out;
    unsigned cube_jobs = 0;
    CLI::App* cube = app.add_subcommand("cube", "convert a time-series cube from a manifest");
    cube->add_option("--manifest", cube_manifest, "cube manifest JSON")->required();
    cube->add_option("--out", cube_out, "output directory")->required();
    cube->add_option("--jobs", cube_jobs, "worker count (default: CPUs, or NBAR_JOBS)");

    // kernels
    double sun_deg = 0, view_deg = 0, az_deg = 0;
    std::string kernels_band;
    CLI::App* kernels = app.add_subcommand("kernels", "print kernel values for one geometry");
    kernels->add_option("--sun-zenith", sun_deg, "sun zenith, degrees")->required();
    kernels->add_option("--view-zenith", view_deg, "view zenith, degrees")->required();
    kernels->add_option("--rel-azimuth", az_deg, "relative azimuth, degrees")->required();
    kernels->add_option("--band", kernels_band, "also print BRDF and c for this band");

    // c-factor
    std::string cf_safe_dir, cf_csv, cf_tiff_dir;
    std::vector<std::string> cf_bands;
    CLI::App* cfactor = app.add_subcommand("c-factor", "export a scene's coarse c-factor grid");
    cfactor->add_option("safe_dir", cf_safe_dir, "SAFE directory, STAC item .json, or URL")
        ->required();
    cfactor->add_option("--csv", cf_csv, "CSV output path ('-' for stdout)");
    cfactor->add_option("--tiff-dir", cf_tiff_dir, "write 23x23 float GeoTIFFs here");
    cfactor->add_option("--bands", cf_bands, "band subset")->delimiter(',');

    // dump-constants
    std::string constants_out;
    CLI::App* constants = app.add_subcommand("dump-constants", "print the coefficient table");
    constants->add_option("--out", constants_out, "write to a file instead of stdout");

    // indices
    std::string idx_nbar, idx_sr, idx_out;
    std::vector<std::string> idx_names;
    CLI::App* indices =
        app.add_subcommand("indices", "vegetation indices and NBAR-vs-SR index deltas");
    indices->add_option("--nbar", idx_nbar, "manifest of NBAR reflectance")->required();
    indices->add_option("--sr", idx_sr, "manifest of (harmonized) SR reflectance")->required();
    indices->add_option("--out", idx_out, "output directory")->required();
    indices->add_option("--indices", idx_names, "subset: NDVI,NIRv,kNDVI,IRECI")
        ->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (safe->parsed()) return run_safe(safe_dir, safe_format, safe_bands, safe_jobs);
        if (cube->parsed()) return run_cube(cube_manifest, cube_out, cube_jobs);
        if (kernels->parsed()) return run_kernels(sun_deg, view_deg, az_deg, kernels_band);
        if (cfactor->parsed()) return run_cfactor(cf_safe_dir, cf_csv, cf_tiff_dir, cf_bands);
        if (constants->parsed()) {
            const std::string csv = s2nbar::dump_constants_csv();
            if (constants_out.empty()) {
                std::fwrite(csv.data(), 1, csv.size(), stdout);
            } else {
                std::ofstream f(constants_out, std::ios::binary);
                f << csv;
                if (!f) s2nbar::fail(s2nbar::errc::io_error, "cannot write " + constants_out);
            }
            return exit_ok;
        }
        if (indices->parsed()) return run_indices(idx_nbar, idx_sr, idx_out, idx_names);
    } catch (const s2nbar::error& e) {
        std::fprintf(stderr, "nbar: %s\n", e.what());
        switch (e.code()) {
            case s2nbar::errc::usage_error:
            case s2nbar::errc::unknown_band_id:
                return exit_usage;
            default:
                return exit_fatal;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "nbar: %s\n", e.what());
        return exit_fatal;
    }
    return exit_usage;
}
