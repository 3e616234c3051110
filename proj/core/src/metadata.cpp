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

#include "s2nbar/metadata.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "s2nbar/errors.hpp"
#include "xml_dom.hpp"

namespace s2nbar {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
    const char* ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

double parse_double(std::string_view text, errc code, const std::string& context) {
    const std::string_view t = trim(text);
    double value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(value)) {
        fail(code, context + ": '" + std::string(text) + "' is not a finite number");
    }
    return value;
}

int parse_int(std::string_view text, errc code, const std::string& context) {
    const std::string_view t = trim(text);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
        fail(code, context + ": '" + std::string(text) + "' is not an integer");
    }
    return value;
}

const xml::node& require(const xml::node& parent, std::string_view name) {
    const xml::node* n = parent.find(name);
    if (!n) fail(errc::missing_field, std::string(name));
    return *n;
}

// Reads one Zenith/Azimuth element: Values_List with 23 VALUES rows of 23
// space-separated cells, "NaN" marking missing nodes.
grid2d<double> parse_values_grid(const xml::node& angle_node, angle_kind kind,
                                 const std::string& context) {
    const xml::node& values_list = require(angle_node, "Values_List");
    std::vector<const xml::node*> rows;
    for (const xml::node& c : values_list.children) {
        if (c.name == "VALUES") rows.push_back(&c);
    }
    if (rows.size() != angle_grid_size) {
        fail(errc::grid_shape_mismatch,
             context + ": expected " + std::to_string(angle_grid_size) + " rows, got " +
                 std::to_string(rows.size()));
    }

    grid2d<double> grid(angle_grid_size, angle_grid_size, nan);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::string_view line = trim(rows[r]->text);
        std::size_t c = 0;
        while (!line.empty()) {
            const auto sep = line.find(' ');
            const std::string_view cell = trim(line.substr(0, sep));
            line = sep == std::string_view::npos ? std::string_view{} : trim(line.substr(sep + 1));
            if (cell.empty()) continue;
            if (c >= angle_grid_size) {
                fail(errc::grid_shape_mismatch, context + ": row " + std::to_string(r) +
                                                    " has more than " +
                                                    std::to_string(angle_grid_size) + " values");
            }
            double v;
            if (cell == "NaN") {
                v = nan;
            } else {
                v = parse_double(cell, errc::grid_shape_mismatch, context + " cell");
                if (kind == angle_kind::zenith && (v < 0.0 || v >= 90.0)) {
                    fail(errc::domain_error,
                         context + ": zenith " + std::string(cell) + " outside [0, 90)");
                }
                if (kind == angle_kind::azimuth && (v < 0.0 || v > 360.0)) {
                    fail(errc::domain_error,
                         context + ": azimuth " + std::string(cell) + " outside [0, 360]");
                }
            }
            grid(r, c++) = v;
        }
        if (c != angle_grid_size) {
            fail(errc::grid_shape_mismatch, context + ": row " + std::to_string(r) + " has " +
                                                std::to_string(c) + " values, expected " +
                                                std::to_string(angle_grid_size));
        }
    }
    return grid;
}

void check_step(const xml::node& angle_node, const char* element, const std::string& context) {
    const xml::node* step = angle_node.find(element);
    if (!step) return;  // steps are fixed by contract; absent is tolerated
    const double v = parse_double(step->text, errc::grid_shape_mismatch, context);
    if (v != angle_grid_step_m) {
        fail(errc::grid_shape_mismatch, context + ": " + element + " is " + std::to_string(v) +
                                            ", only 5000 m grids are supported");
    }
}

}  // namespace

angle_grid::angle_grid() {
    for (auto& p : _planes) p = grid2d<double>(angle_grid_size, angle_grid_size, nan);
}

double& angle_grid::at(std::size_t plane_, angle_kind a, std::size_t row, std::size_t col) {
    return plane(plane_, a)(row, col);
}

double angle_grid::at(std::size_t plane_, angle_kind a, std::size_t row, std::size_t col) const {
    return plane(plane_, a)(row, col);
}

grid2d<double>& angle_grid::plane(std::size_t plane_, angle_kind a) {
    return _planes[plane_ * 2 + static_cast<std::size_t>(a)];
}

const grid2d<double>& angle_grid::plane(std::size_t plane_, angle_kind a) const {
    return _planes[plane_ * 2 + static_cast<std::size_t>(a)];
}

bool angle_grid::missing(std::size_t plane_, angle_kind a, std::size_t row,
                         std::size_t col) const {
    return std::isnan(at(plane_, a, row, col));
}

bool angle_grid::band_missing(band_id b) const {
    for (angle_kind a : {angle_kind::zenith, angle_kind::azimuth}) {
        for (double v : band(b, a).values()) {
            if (!std::isnan(v)) return false;
        }
    }
    return true;
}

double parse_product_metadata(std::string_view xml_bytes) {
    const xml::node doc = xml::parse(xml_bytes);
    const xml::node* pb = doc.find("PROCESSING_BASELINE");
    if (!pb) fail(errc::missing_field, "PROCESSING_BASELINE");
    const double value =
        parse_double(pb->text, errc::unparsable_baseline, "PROCESSING_BASELINE");
    if (value < 0) {
        fail(errc::unparsable_baseline, "PROCESSING_BASELINE is negative: " + pb->text);
    }
    return value;
}

raw_tile_angles parse_tile_metadata(std::string_view xml_bytes) {
    const xml::node doc = xml::parse(xml_bytes);
    raw_tile_angles out;

    const xml::node& sun = require(doc, "Sun_Angles_Grid");
    const xml::node& sun_zen = require(sun, "Zenith");
    const xml::node& sun_az = require(sun, "Azimuth");
    check_step(sun_zen, "COL_STEP", "Sun_Angles_Grid");
    check_step(sun_zen, "ROW_STEP", "Sun_Angles_Grid");
    out.sun_zenith = parse_values_grid(sun_zen, angle_kind::zenith, "sun zenith");
    out.sun_azimuth = parse_values_grid(sun_az, angle_kind::azimuth, "sun azimuth");

    for (const xml::node* grids : doc.find_all("Viewing_Incidence_Angles_Grids")) {
        const auto band_attr = grids->attr("bandId");
        if (!band_attr) fail(errc::missing_field, "Viewing_Incidence_Angles_Grids@bandId");
        const auto det_attr = grids->attr("detectorId");
        if (!det_attr) fail(errc::missing_field, "Viewing_Incidence_Angles_Grids@detectorId");
        const int msi_band = parse_int(*band_attr, errc::unknown_band_id, "bandId");
        const int detector = parse_int(*det_attr, errc::missing_field, "detectorId");
        const std::optional<band_id> band = band_from_msi_index(msi_band);

        const std::string context =
            "band " + std::to_string(msi_band) + " detector " + std::to_string(detector);
        detector_angles det;
        if (const xml::node* zen = grids->find("Zenith")) {
            check_step(*zen, "COL_STEP", context);
            check_step(*zen, "ROW_STEP", context);
            det.zenith = parse_values_grid(*zen, angle_kind::zenith, context + " zenith");
        } else {
            det.zenith = grid2d<double>(angle_grid_size, angle_grid_size, nan);
        }
        if (const xml::node* az = grids->find("Azimuth")) {
            det.azimuth = parse_values_grid(*az, angle_kind::azimuth, context + " azimuth");
        } else {
            det.azimuth = grid2d<double>(angle_grid_size, angle_grid_size, nan);
        }

        if (!band) continue;  // B01/B8A/B09/B10: parsed for validation, then dropped
        const auto key = std::make_pair(*band, detector);
        if (out.detectors.count(key)) {
            fail(errc::malformed_xml, "duplicate angle grids for " + context);
        }
        out.detectors.emplace(key, std::move(det));
    }

    const xml::node& geopos = require(doc, "Geoposition");
    out.geocode.ulx = parse_double(require(geopos, "ULX").text, errc::missing_field, "ULX");
    out.geocode.uly = parse_double(require(geopos, "ULY").text, errc::missing_field, "ULY");
    out.geocode.col_step_m = angle_grid_step_m;
    out.geocode.row_step_m = angle_grid_step_m;

    std::string cs = std::string(trim(require(doc, "HORIZONTAL_CS_CODE").text));
    if (cs.rfind("EPSG:", 0) == 0 || cs.rfind("epsg:", 0) == 0) cs = cs.substr(5);
    out.geocode.epsg = parse_int(cs, errc::missing_field, "HORIZONTAL_CS_CODE");

    if (const xml::node* tile = doc.find("TILE_ID")) out.tile_id = trim(tile->text);
    return out;
}

namespace {

// Fills NaN nodes from the nearest non-NaN node; squared Euclidean distance in
// index space, ties resolved by row-major scan order (smallest row, then col).
void nearest_fill(grid2d<double>& plane) {
    struct node_ref {
        std::size_t r, c;
    };
    std::vector<node_ref> present;
    present.reserve(plane.size());
    for (std::size_t r = 0; r < plane.rows(); ++r) {
        for (std::size_t c = 0; c < plane.cols(); ++c) {
            if (!std::isnan(plane(r, c))) present.push_back({r, c});
        }
    }
    if (present.empty() || present.size() == plane.size()) return;

    const grid2d<double> source = plane;
    for (std::size_t r = 0; r < plane.rows(); ++r) {
        for (std::size_t c = 0; c < plane.cols(); ++c) {
            if (!std::isnan(plane(r, c))) continue;
            std::size_t best = 0;
            std::size_t best_d2 = std::numeric_limits<std::size_t>::max();
            for (std::size_t i = 0; i < present.size(); ++i) {
                const std::size_t dr = present[i].r > r ? present[i].r - r : r - present[i].r;
                const std::size_t dc = present[i].c > c ? present[i].c - c : c - present[i].c;
                const std::size_t d2 = dr * dr + dc * dc;
                if (d2 < best_d2) {
                    best_d2 = d2;
                    best = i;
                }
            }
            plane(r, c) = source(present[best].r, present[best].c);
        }
    }
}

}  // namespace

angle_grid merge_detectors(const raw_tile_angles& raw) {
    const bool sun_empty = raw.sun_zenith.empty() && raw.sun_azimuth.empty();
    if (raw.detectors.empty() && sun_empty) fail(errc::empty_input, "no angle grids");

    angle_grid out;
    if (!raw.sun_zenith.empty()) out.sun(angle_kind::zenith) = raw.sun_zenith;
    if (!raw.sun_azimuth.empty()) out.sun(angle_kind::azimuth) = raw.sun_azimuth;

    for (band_id b : all_bands) {
        for (angle_kind kind : {angle_kind::zenith, angle_kind::azimuth}) {
            grid2d<double> sum(angle_grid_size, angle_grid_size, 0.0);
            grid2d<int> count(angle_grid_size, angle_grid_size, 0);
            bool any = false;
            // std::map iteration puts detectors in a canonical order, so the
            // accumulation is independent of how the input was assembled.
            for (const auto& [key, det] : raw.detectors) {
                if (key.first != b) continue;
                any = true;
                const grid2d<double>& g =
                    kind == angle_kind::zenith ? det.zenith : det.azimuth;
                for (std::size_t r = 0; r < angle_grid_size; ++r) {
                    for (std::size_t c = 0; c < angle_grid_size; ++c) {
                        const double v = g(r, c);
                        if (std::isnan(v)) continue;
                        sum(r, c) += v;
                        count(r, c) += 1;
                    }
                }
            }
            if (!any) continue;  // band absent: plane stays fully missing

            grid2d<double>& plane = out.band(b, kind);
            for (std::size_t r = 0; r < angle_grid_size; ++r) {
                for (std::size_t c = 0; c < angle_grid_size; ++c) {
                    if (count(r, c) > 0) plane(r, c) = sum(r, c) / count(r, c);
                }
            }
            nearest_fill(plane);
        }
    }
    return out;
}

grid_node_axes grid_node_coordinates(const tile_geocode& geocode) {
    grid_node_axes axes;
    for (std::size_t k = 0; k < angle_grid_size; ++k) {
        axes.x[k] = geocode.ulx + static_cast<double>(k) * geocode.col_step_m;
        axes.y[k] = geocode.uly - static_cast<double>(k) * geocode.row_step_m;
    }
    return axes;
}

}  // namespace s2nbar
