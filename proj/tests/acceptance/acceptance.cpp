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

// Acceptance suite: one line per criterion, every tolerance pinned in code.
// Exits nonzero if anything fails or overruns its time budget.

#include <sys/wait.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include <httplib.h>

#include "fixtures.hpp"
#include "scene_builder.hpp"
#include "s2nbar/brdf.hpp"
#include "s2nbar/errors.hpp"
#include "s2nbar/indices.hpp"
#include "s2nbar/pipeline.hpp"

using namespace s2nbar;

namespace {

const std::filesystem::path fixture_dir = S2NBAR_FIXTURE_DIR;
constexpr double pi = std::numbers::pi;
constexpr double d2r = pi / 180.0;

struct check_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
    if (!ok) throw check_failure(what);
}

int run_shell(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    expect(f.good(), "cannot open " + p.string());
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

int g_failures = 0;

void criterion(int number, const std::string& name, double budget_seconds,
               const std::function<void()>& body) {
    const auto start = std::chrono::steady_clock::now();
    std::string failure;
    try {
        body();
    } catch (const std::exception& e) {
        failure = e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (failure.empty() && elapsed > budget_seconds) {
        failure = "runtime " + std::to_string(elapsed) + "s exceeds " +
                  std::to_string(budget_seconds) + "s";
    }
    if (failure.empty()) {
        std::printf("PASS criterion %2d: %s (%.2fs)\n", number, name.c_str(), elapsed);
    } else {
        std::printf("FAIL criterion %2d: %s (%.2fs): %s\n", number, name.c_str(), elapsed,
                    failure.c_str());
        ++g_failures;
    }
    std::fflush(stdout);
}

// ---------------------------------------------------------------- helpers --

constexpr const char* expected_constants_csv =
    "band,f_iso,f_geo,f_vol,resolution_m\n"
    "B02,0.0774,0.0079,0.0372,10\n"
    "B03,0.1306,0.0178,0.0580,10\n"
    "B04,0.1690,0.0227,0.0574,10\n"
    "B05,0.2085,0.0256,0.0845,20\n"
    "B06,0.2316,0.0273,0.1003,20\n"
    "B07,0.2599,0.0294,0.1197,20\n"
    "B08,0.3093,0.0330,0.1535,10\n"
    "B11,0.3430,0.0453,0.1154,20\n"
    "B12,0.2658,0.0387,0.0639,20\n";

bool close(double a, double b, double rtol, double atol) {
    return std::fabs(a - b) <= atol + rtol * std::fabs(b);
}

void compare_plus_minus_one(const grid2d<std::uint16_t>& got,
                            const grid2d<std::uint16_t>& want, const std::string& label) {
    expect(got.rows() == want.rows() && got.cols() == want.cols(), label + ": shape mismatch");
    for (std::size_t i = 0; i < got.values().size(); ++i) {
        const int diff = int(got.values()[i]) - int(want.values()[i]);
        expect(std::abs(diff) <= 1, label + ": pixel " + std::to_string(i) + " differs by " +
                                        std::to_string(diff));
    }
}

}  // namespace

int main() {
    const testfx::temp_dir tmp("acceptance");
    const std::string nbar_bin = NBAR_BIN;

    criterion(1, "constants audit via dump-constants", 1.0, [&] {
        const auto out = tmp.path() / "constants.csv";
        expect(run_shell(nbar_bin + " dump-constants >" + out.string()) == 0,
               "dump-constants exited nonzero");
        expect(slurp(out) == expected_constants_csv, "CSV differs from the published table");
    });

    criterion(2, "kernel analytic identities", 1.0, [&] {
        std::mt19937_64 rng(101);
        std::uniform_real_distribution<double> phi(-2 * pi, 2 * pi);
        for (int i = 0; i < 100; ++i) {
            const double p = phi(rng);
            expect(std::fabs(k_vol(0.0, 0.0, p)) <= 1e-12, "k_vol(0,0,phi) != 0");
            expect(std::fabs(k_geo(0.0, 0.0, p)) <= 1e-12, "k_geo(0,0,phi) != 0");
        }
        expect(std::fabs(k_vol(60 * d2r, 60 * d2r, 0.0) - pi / 4) <= 1e-12,
               "k_vol(60,60,0) != pi/4");
        expect(std::fabs(k_geo(60 * d2r, 60 * d2r, 0.0) - 2.0) <= 1e-12,
               "k_geo(60,60,0) != 2");
    });

    criterion(3, "oracle equivalence on 1000 random triples", 10.0, [&] {
        std::ifstream f(fixture_dir / "kernel_oracle_cases.csv");
        expect(f.good(), "kernel_oracle_cases.csv missing");
        std::string line;
        std::getline(f, line);  // header
        int rows = 0;
        while (std::getline(f, line)) {
            std::stringstream ss(line);
            std::vector<double> v;
            std::string cell;
            while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
            expect(v.size() == 23, "bad oracle row");
            const double theta = v[0], vartheta = v[1], phi = v[2];
            expect(close(k_vol(theta, vartheta, phi), v[3], 1e-9, 1e-12), "k_vol mismatch");
            expect(close(k_geo(theta, vartheta, phi), v[4], 1e-9, 1e-12), "k_geo mismatch");
            for (std::size_t i = 0; i < band_count; ++i) {
                const spectral_params& p = params_for(all_bands[i]);
                expect(close(brdf(p, k_vol(theta, vartheta, phi), k_geo(theta, vartheta, phi)),
                             v[5 + i], 1e-9, 1e-12),
                       "brdf mismatch");
                if (std::isnan(v[14 + i])) {
                    try {
                        c_factor(p, theta, vartheta, phi);
                        expect(false, "expected DegenerateBrdf");
                    } catch (const error&) {
                    }
                } else {
                    expect(close(c_factor(p, theta, vartheta, phi), v[14 + i], 1e-9, 1e-12),
                           "c mismatch");
                }
            }
            ++rows;
        }
        expect(rows == 1000, "expected 1000 oracle rows");
    });

    criterion(4, "nadir invariance on a 1098x1098 crop", 30.0, [&] {
        testfx::synth_scene scene;
        scene.dir = tmp.path() / "NADIR.SAFE";
        scene.baseline = "05.00";
        scene.size_10m = 1098;
        scene.view_zenith = testfx::constant(0.0);
        scene.sun_zenith = [](std::size_t r, std::size_t c) {
            return 15.0 + 0.8 * double(r) + 0.3 * double(c);
        };
        scene.dn = [](band_id b, std::size_t y, std::size_t x) {
            return static_cast<std::uint16_t>((17 * band_index(b) + 31 * y + 7 * x) % 12000);
        };
        scene.build();

        const safe_report report = nbar_safe(scene.dir, {});
        expect(report.all_ok(), "nbar_safe failed");
        for (const band_report& entry : report.bands) {
            const band_raster out = read_band_raster(entry.output);
            for (std::size_t y = 0; y < out.data.rows(); ++y) {
                for (std::size_t x = 0; x < out.data.cols(); ++x) {
                    const std::uint16_t harmonized =
                        harmonize_dn(scene.dn(entry.band, y, x), 5.0);
                    expect(out.data(y, x) == harmonized,
                           std::string(band_name(entry.band)) + ": NBAR != harmonized");
                }
            }
        }
    });

    criterion(5, "reciprocity and azimuth symmetry, 10000 samples", 10.0, [&] {
        std::mt19937_64 rng(103);
        std::uniform_real_distribution<double> zen(0.0, 85.0 * d2r), phi(-2 * pi, 2 * pi);
        for (int i = 0; i < 10000; ++i) {
            const double a = zen(rng), b = zen(rng), p = phi(rng);
            expect(std::fabs(k_vol(a, b, p) - k_vol(b, a, p)) <= 1e-12, "k_vol reciprocity");
            expect(std::fabs(k_geo(a, b, p) - k_geo(b, a, p)) <= 1e-12, "k_geo reciprocity");
            expect(std::fabs(k_vol(a, b, p) - k_vol(a, b, -p)) <= 1e-12, "k_vol sign flip");
            expect(std::fabs(k_geo(a, b, p) - k_geo(a, b, -p)) <= 1e-12, "k_geo sign flip");
            expect(std::fabs(k_vol(a, b, p) - k_vol(a, b, p + 2 * pi)) <= 1e-12,
                   "k_vol period");
            expect(std::fabs(k_geo(a, b, p) - k_geo(a, b, p + 2 * pi)) <= 1e-12,
                   "k_geo period");
        }
    });

    criterion(6, "harmonization branch table", 1.0, [&] {
        const double pbs[] = {2.12, 3.99, 4.00, 5.00};
        const std::uint16_t dns[] = {0, 1, 999, 1000, 1500, 65535};
        for (double pb : pbs) {
            for (std::uint16_t dn : dns) {
                std::uint16_t want;
                if (dn == 0) {
                    want = 0;  // nodata passes through
                } else if (pb < 4.0) {
                    want = dn;
                } else {
                    const int shifted = int(dn) - 1000;
                    want = static_cast<std::uint16_t>(shifted < 1 ? 1 : shifted);
                }
                expect(harmonize_dn(dn, pb) == want,
                       "harmonize(" + std::to_string(dn) + ", " + std::to_string(pb) + ")");
            }
        }
    });

    criterion(7, "end-to-end fixture vs oracle, SAFE and cube paths", 30.0, [&] {
        const auto work = tmp.path() / "S2A_E2E_FIXTURE.SAFE";
        std::filesystem::copy(fixture_dir / "safe_256" / "S2A_E2E_FIXTURE.SAFE", work,
                              std::filesystem::copy_options::recursive);
        const safe_report report = nbar_safe(work, {});
        expect(report.all_ok(), "SAFE path failed");
        for (const band_report& entry : report.bands) {
            const band_raster got = read_band_raster(entry.output);
            const band_raster want = read_band_raster(
                fixture_dir / "expected_256" /
                (std::string(band_name(entry.band)) + "_expected.tif"));
            compare_plus_minus_one(got.data, want.data,
                                   "oracle " + std::string(band_name(entry.band)));
        }

        for (const char* manifest : {"cube_10m.json", "cube_20m.json"}) {
            cube_spec spec = read_cube_manifest(fixture_dir / manifest);
            const cube_slab input = load_cube_slab(spec);
            const cube_result cube = nbar_cube(spec, input);
            expect(cube.report.all_ok(), "cube path failed");
            for (std::size_t bi = 0; bi < spec.bands.size(); ++bi) {
                const band_raster from_safe =
                    read_band_raster(report.bands[band_index(spec.bands[bi])].output);
                grid2d<std::uint16_t> plane(spec.target.height, spec.target.width);
                for (std::size_t y = 0; y < spec.target.height; ++y) {
                    for (std::size_t x = 0; x < spec.target.width; ++x) {
                        plane(y, x) = cube.nbar.dn(0, bi, y, x);
                    }
                }
                compare_plus_minus_one(plane, from_safe.data, "cube/SAFE consistency");
            }
        }
    });

    criterion(8, "interpolation properties on 100 random grids", 10.0, [&] {
        std::mt19937_64 rng(107);
        std::uniform_real_distribution<double> val(-4.0, 4.0), coeff(-2.0, 2.0);
        tile_geocode geocode;
        geocode.ulx = 0;
        geocode.uly = 0;
        geocode.epsg = 32632;

        geo_transform odd;
        odd.origin_x = 313;
        odd.origin_y = -217;
        odd.pixel_w = 893;
        odd.pixel_h = 1201;
        odd.epsg = 32632;

        geo_transform aligned;  // centers exactly on nodes
        aligned.origin_x = -2500;
        aligned.origin_y = 2500;
        aligned.pixel_w = 5000;
        aligned.pixel_h = 5000;
        aligned.epsg = 32632;

        for (int iter = 0; iter < 100; ++iter) {
            grid2d<double> g1(angle_grid_size, angle_grid_size);
            grid2d<double> g2(angle_grid_size, angle_grid_size);
            for (double& v : g1.values()) v = val(rng);
            for (double& v : g2.values()) v = val(rng);

            const double c0 = val(rng);
            const grid2d<double> constant_grid(angle_grid_size, angle_grid_size, c0);
            const grid2d<double> flat = interp_bilinear(constant_grid, geocode, odd, 5, 6);
            for (double v : flat.values()) {
                expect(v == c0, "constant-field exactness");
            }

            const grid2d<double> knots =
                interp_bilinear(g1, geocode, aligned, angle_grid_size, angle_grid_size);
            for (std::size_t r = 0; r < angle_grid_size; ++r) {
                for (std::size_t c = 0; c < angle_grid_size; ++c) {
                    expect(knots(r, c) == g1(r, c), "knot reproduction");
                }
            }

            const double a = coeff(rng), b = coeff(rng);
            grid2d<double> mix(angle_grid_size, angle_grid_size);
            for (std::size_t i = 0; i < mix.values().size(); ++i) {
                mix.values()[i] = a * g1.values()[i] + b * g2.values()[i];
            }
            const auto lhs = interp_bilinear(mix, geocode, odd, 5, 6);
            const auto r1 = interp_bilinear(g1, geocode, odd, 5, 6);
            const auto r2 = interp_bilinear(g2, geocode, odd, 5, 6);
            double lo = g1.values()[0], hi = g1.values()[0];
            for (double v : g1.values()) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            for (std::size_t i = 0; i < lhs.values().size(); ++i) {
                expect(std::fabs(lhs.values()[i] -
                                 (a * r1.values()[i] + b * r2.values()[i])) <= 1e-12,
                       "linearity");
                expect(r1.values()[i] >= lo - 1e-12 && r1.values()[i] <= hi + 1e-12,
                       "boundedness");
            }
        }
    });

    criterion(9, "STAC client against a local mock server", 10.0, [&] {
        httplib::Server server;
        std::atomic<int> granule_hits{0}, wrong_key_hits{0}, flaky_hits{0};
        const std::string granule_xml =
            testfx::mtd_tl_xml(testfx::constant(30.0), testfx::constant(150.0),
                               {{3, 1, testfx::constant(4.0), testfx::constant(110.0)}});
        server.Get("/granule.xml", [&](const httplib::Request&, httplib::Response& res) {
            ++granule_hits;
            res.set_content(granule_xml, "application/xml");
        });
        server.Get("/wrong.xml", [&](const httplib::Request&, httplib::Response& res) {
            ++wrong_key_hits;
            res.set_content("ignored", "application/xml");
        });
        server.Get("/flaky.xml", [&](const httplib::Request&, httplib::Response& res) {
            ++flaky_hits;
            res.status = 503;
        });
        const int port = server.bind_to_any_port("127.0.0.1");
        std::thread listener([&] { server.listen_after_bind(); });
        server.wait_until_ready();
        const std::string base = "http://127.0.0.1:" + std::to_string(port);

        std::vector<std::chrono::milliseconds> sleeps;
        http_options http;
        http.sleeper = [&](std::chrono::milliseconds d) { sleeps.push_back(d); };

        // key search order: granule-metadata must win over metadata
        const std::string item = R"({"properties": {"s2:processing_baseline": "05.00"},
            "assets": {"metadata": {"href": ")" + base + R"(/wrong.xml"},
                       "granule-metadata": {"href": ")" + base + R"(/granule.xml"}}})";
        const stac_fetch_result got = fetch_stac_metadata(item, {}, http);
        expect(granule_hits == 1 && wrong_key_hits == 0, "asset key search order");
        expect(got.baseline == 5.0 && got.baseline_from_property, "baseline property");

        // retry/backoff schedule: 3 retries after the initial attempt
        sleeps.clear();
        bool threw = false;
        try {
            http_get(base + "/flaky.xml", http);
        } catch (const error& e) {
            threw = e.code() == errc::http_error;
        }
        expect(threw, "HttpError after retries");
        expect(flaky_hits == 4, "expected 4 attempts, saw " + std::to_string(flaky_hits));
        expect(sleeps.size() == 3 && sleeps[0] == std::chrono::milliseconds(1000) &&
                   sleeps[1] == std::chrono::milliseconds(2000) &&
                   sleeps[2] == std::chrono::milliseconds(4000),
               "backoff schedule");

        // NoMetadataAsset mapping
        threw = false;
        try {
            fetch_stac_metadata(R"({"assets": {"thumbnail": {"href": "x.png"}}})", {}, http);
        } catch (const error& e) {
            threw = e.code() == errc::no_metadata_asset;
        }
        expect(threw, "NoMetadataAsset mapping");

        server.stop();
        listener.join();
    });

    criterion(10, "determinism: cube --jobs 1 equals --jobs 8", 60.0, [&] {
        // three scenes with distinct geometry and baselines
        struct cfg {
            double sun, view;
            const char* pb;
        };
        const cfg cfgs[3] = {{20.0, 4.0, "03.00"}, {30.0, 7.0, "05.00"}, {40.0, 10.0, "04.00"}};
        std::string timesteps;
        for (int i = 0; i < 3; ++i) {
            testfx::synth_scene scene;
            scene.dir = tmp.path() / ("DET" + std::to_string(i) + ".SAFE");
            scene.baseline = cfgs[i].pb;
            scene.sun_zenith = testfx::constant(cfgs[i].sun);
            scene.view_zenith = testfx::constant(cfgs[i].view);
            scene.size_10m = 32;
            scene.dn = [i](band_id b, std::size_t y, std::size_t x) {
                return static_cast<std::uint16_t>(1100 + 97 * i + 13 * band_index(b) +
                                                  7 * y + 3 * x);
            };
            scene.build();
            const auto raster = scene.granule() / "IMG_DATA" / "R10m" /
                                "T32UMC_SYNTH_B04_10m.tif";
            const auto raster8 = scene.granule() / "IMG_DATA" / "R10m" /
                                 "T32UMC_SYNTH_B08_10m.tif";
            if (i) timesteps += ",";
            timesteps += R"({"datetime": "2023-06-0)" + std::to_string(i + 1) +
                         R"(T10:30:00Z", "metadata": ")" + scene.dir.string() +
                         R"(", "bands": {"B04": ")" + raster.string() +
                         R"(", "B08": ")" + raster8.string() + R"("}})";
        }
        const auto manifest = tmp.path() / "determinism.json";
        testfx::write_text(manifest, R"({"timesteps": [)" + timesteps +
                                         R"(], "target": {"epsg": 32632,
            "origin_x": 650000.0, "origin_y": 5750020.0, "pixel": 10.0,
            "width": 32, "height": 32}})");

        const auto out1 = tmp.path() / "jobs1";
        const auto out8 = tmp.path() / "jobs8";
        expect(run_shell(nbar_bin + " cube --manifest " + manifest.string() + " --out " +
                         out1.string() + " --jobs 1") == 0,
               "--jobs 1 run failed");
        expect(run_shell(nbar_bin + " cube --manifest " + manifest.string() + " --out " +
                         out8.string() + " --jobs 8") == 0,
               "--jobs 8 run failed");

        std::vector<std::filesystem::path> names;
        for (const auto& entry : std::filesystem::directory_iterator(out1)) {
            names.push_back(entry.path().filename());
        }
        expect(names.size() == 7, "expected 6 rasters + report.json");
        for (const auto& name : names) {
            expect(slurp(out1 / name) == slurp(out8 / name),
                   name.string() + " differs between --jobs 1 and --jobs 8");
        }
    });

    criterion(11, "index suite analytic cases and nadir delta", 10.0, [&] {
        cube_slab s = cube_slab::make_real(1, {band_id::B08, band_id::B04}, 1, 1);
        s.real(0, 0, 0, 0) = 0.8;
        s.real(0, 1, 0, 0) = 0.2;
        expect(std::fabs(compute_index(s, index_id::ndvi).at(0, 0, 0) - 0.6) <= 1e-12,
               "NDVI(0.8, 0.2) != 0.6");
        expect(std::fabs(compute_index(s, index_id::nirv).at(0, 0, 0) - 0.48) <= 1e-12,
               "NIRv(0.8, 0.2) != 0.48");
        // oracle: tanh(0.36)
        expect(std::fabs(compute_index(s, index_id::kndvi).at(0, 0, 0) -
                         0.34521403413552093) <= 1e-12,
               "kNDVI != tanh(0.36)");
        s.real(0, 0, 0, 0) = 0.4;
        s.real(0, 1, 0, 0) = 0.4;
        expect(compute_index(s, index_id::ndvi).at(0, 0, 0) == 0.0, "NDVI(x, x) != 0");

        // nadir-view scene: NBAR == SR, so every index delta is exactly 0
        testfx::synth_scene scene;
        scene.dir = tmp.path() / "IDX.SAFE";
        scene.baseline = "03.00";
        scene.view_zenith = testfx::constant(0.0);
        scene.size_10m = 16;
        scene.dn = [](band_id b, std::size_t y, std::size_t x) {
            return static_cast<std::uint16_t>(1000 + 400 * band_index(b) + 11 * y + 5 * x);
        };
        scene.build();

        const std::vector<band_id> bands = {band_id::B04, band_id::B08};
        cube_spec spec;
        cube_timestep ts;
        ts.datetime = "2023-06-01T10:30:00Z";
        ts.metadata_source = scene.dir.string();
        spec.timesteps.push_back(ts);
        spec.bands = bands;
        spec.target.transform = {650000.0, 5750020.0, 10.0, 10.0, 32632};
        spec.target.height = spec.target.width = 16;

        cube_slab input = cube_slab::make_dn(1, bands, 16, 16);
        for (std::size_t bi = 0; bi < 2; ++bi) {
            for (std::size_t y = 0; y < 16; ++y) {
                for (std::size_t x = 0; x < 16; ++x) {
                    input.dn(0, bi, y, x) = scene.dn(bands[bi], y, x);
                }
            }
        }
        const cube_result nadired = nbar_cube(spec, input);
        expect(nadired.report.all_ok(), "nadir cube failed");

        for (index_id idx : {index_id::ndvi, index_id::nirv, index_id::kndvi}) {
            const index_slab from_nbar = compute_index(nadired.nbar, idx);
            const index_slab from_sr = compute_index(input, idx);
            const delta_psi_result d = delta_psi(from_nbar, from_sr);
            for (double v : d.delta.values) {
                expect(std::fabs(v) <= 1e-12, "nadir delta-psi not zero");
            }
            expect(std::fabs(d.stats[0].min) <= 1e-12 && std::fabs(d.stats[0].max) <= 1e-12,
                   "nadir delta-psi stats not zero");
        }
    });

    if (g_failures == 0) {
        std::printf("acceptance: all 11 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return 1;
}
