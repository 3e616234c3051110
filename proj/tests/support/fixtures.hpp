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

// Builders for synthetic Sentinel-2 metadata documents and scratch
// directories shared by the unit, pipeline and acceptance suites.

#ifndef S2NBAR_TESTS_FIXTURES_HPP
#define S2NBAR_TESTS_FIXTURES_HPP

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "s2nbar/metadata.hpp"

namespace testfx {

using grid_fn = std::function<double(std::size_t row, std::size_t col)>;

inline grid_fn constant(double v) {
    return [v](std::size_t, std::size_t) { return v; };
}

inline std::string fmt(double v) {
    if (std::isnan(v)) return "NaN";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string values_list(const grid_fn& fn) {
    std::string out = "<Values_List>\n";
    for (std::size_t r = 0; r < s2nbar::angle_grid_size; ++r) {
        out += "<VALUES>";
        for (std::size_t c = 0; c < s2nbar::angle_grid_size; ++c) {
            if (c) out += ' ';
            out += fmt(fn(r, c));
        }
        out += "</VALUES>\n";
    }
    out += "</Values_List>\n";
    return out;
}

inline std::string angle_block(const char* name, const grid_fn& fn, bool with_steps) {
    std::string out = std::string("<") + name + ">\n";
    if (with_steps) {
        out += "<COL_STEP unit=\"m\">5000</COL_STEP>\n<ROW_STEP unit=\"m\">5000</ROW_STEP>\n";
    }
    out += values_list(fn);
    out += std::string("</") + name + ">\n";
    return out;
}

struct detector_spec {
    int msi_band_id;
    int detector_id;
    grid_fn zenith;
    grid_fn azimuth;
};

struct tile_xml_options {
    double ulx = 600000;
    double uly = 5800020;
    int epsg = 32632;
    std::string tile_id = "T32UMC_TEST";
    std::string col_step = "5000";
    std::string row_step = "5000";
    int sun_rows = 23;  // lowered to build malformed fixtures
};

inline std::string mtd_tl_xml(const grid_fn& sun_zenith, const grid_fn& sun_azimuth,
                              const std::vector<detector_spec>& detectors,
                              const tile_xml_options& opt = {}) {
    std::string out =
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<n1:Level-2A_Tile_ID xmlns:n1=\"https://psd-14.sentinel2.eo.esa.int/PSD/"
        "S2_PDI_Level-2A_Tile_Metadata.xsd\">\n"
        "<n1:General_Info>\n<TILE_ID>" +
        opt.tile_id +
        "</TILE_ID>\n</n1:General_Info>\n"
        "<n1:Geometric_Info>\n<Tile_Geocoding>\n"
        "<HORIZONTAL_CS_CODE>EPSG:" +
        std::to_string(opt.epsg) +
        "</HORIZONTAL_CS_CODE>\n"
        "<Geoposition resolution=\"10\">\n<ULX>" +
        fmt(opt.ulx) + "</ULX>\n<ULY>" + fmt(opt.uly) +
        "</ULY>\n<XDIM>10</XDIM>\n<YDIM>-10</YDIM>\n</Geoposition>\n"
        "</Tile_Geocoding>\n<Tile_Angles>\n";

    out += "<Sun_Angles_Grid>\n<Zenith>\n<COL_STEP unit=\"m\">" + opt.col_step +
           "</COL_STEP>\n<ROW_STEP unit=\"m\">" + opt.row_step + "</ROW_STEP>\n";
    if (opt.sun_rows == 23) {
        out += values_list(sun_zenith);
    } else {
        out += "<Values_List>\n";
        for (int r = 0; r < opt.sun_rows; ++r) {
            out += "<VALUES>";
            for (std::size_t c = 0; c < s2nbar::angle_grid_size; ++c) {
                if (c) out += ' ';
                out += fmt(sun_zenith(static_cast<std::size_t>(r), c));
            }
            out += "</VALUES>\n";
        }
        out += "</Values_List>\n";
    }
    out += "</Zenith>\n" + angle_block("Azimuth", sun_azimuth, false) + "</Sun_Angles_Grid>\n";

    for (const detector_spec& d : detectors) {
        out += "<Viewing_Incidence_Angles_Grids bandId=\"" + std::to_string(d.msi_band_id) +
               "\" detectorId=\"" + std::to_string(d.detector_id) + "\">\n";
        out += angle_block("Zenith", d.zenith, true);
        out += angle_block("Azimuth", d.azimuth, false);
        out += "</Viewing_Incidence_Angles_Grids>\n";
    }

    out += "</Tile_Angles>\n</n1:Geometric_Info>\n</n1:Level-2A_Tile_ID>\n";
    return out;
}

inline std::string mtd_msil2a_xml(const std::string& baseline_text) {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<n1:Level-2A_User_Product xmlns:n1=\"https://psd-14.sentinel2.eo.esa.int/PSD/"
           "User_Product_Level-2A.xsd\">\n<n1:General_Info>\n<Product_Info>\n"
           "<PROCESSING_BASELINE>" +
           baseline_text +
           "</PROCESSING_BASELINE>\n</Product_Info>\n</n1:General_Info>\n"
           "</n1:Level-2A_User_Product>\n";
}

/// All nine convertible bands with the same angle fields, two detectors each
/// (values offset so the mean is exercised).
inline std::vector<detector_spec> detectors_all_bands(const grid_fn& view_zenith,
                                                      const grid_fn& view_azimuth) {
    std::vector<detector_spec> out;
    for (int msi : {1, 2, 3, 4, 5, 6, 7, 11, 12}) {
        out.push_back({msi, 1, view_zenith, view_azimuth});
    }
    return out;
}

/// Unique scratch directory under the system temp dir, removed on scope exit.
class temp_dir {
   public:
    explicit temp_dir(const std::string& label) {
        static std::mt19937_64 rng{std::random_device{}()};
        _path = std::filesystem::temp_directory_path() /
                (label + "-" + std::to_string(rng()));
        std::filesystem::create_directories(_path);
    }
    ~temp_dir() {
        std::error_code ec;
        std::filesystem::remove_all(_path, ec);
    }
    temp_dir(const temp_dir&) = delete;
    temp_dir& operator=(const temp_dir&) = delete;

    const std::filesystem::path& path() const { return _path; }

   private:
    std::filesystem::path _path;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::create_directories(path.parent_path());
    FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot write " + path.string());
    std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);
}

}  // namespace testfx

#endif
