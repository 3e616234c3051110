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

#include "s2nbar/indices.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "s2nbar/errors.hpp"

namespace s2nbar {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

double ndvi_of(double nir, double red) {
    const double denom = nir + red;
    if (std::isnan(nir) || std::isnan(red) || denom == 0.0) return nan;
    return (nir - red) / denom;
}

}  // namespace

std::string_view index_name(index_id idx) {
    switch (idx) {
        case index_id::ndvi: return "NDVI";
        case index_id::nirv: return "NIRv";
        case index_id::kndvi: return "kNDVI";
        case index_id::ireci: return "IRECI";
    }
    return "?";
}

index_id index_from_name(std::string_view name) {
    for (index_id idx : all_indices) {
        if (index_name(idx) == name) return idx;
    }
    fail(errc::usage_error, "unknown index '" + std::string(name) +
                                "'; expected NDVI, NIRv, kNDVI or IRECI");
}

std::vector<band_id> index_required_bands(index_id idx) {
    switch (idx) {
        case index_id::ndvi:
        case index_id::nirv:
        case index_id::kndvi:
            return {band_id::B08, band_id::B04};
        case index_id::ireci:
            return {band_id::B04, band_id::B05, band_id::B06, band_id::B07};
    }
    return {};
}

index_slab compute_index(const cube_slab& slab, index_id idx) {
    // resolve band planes up front; this is also the missing_band check
    std::size_t nir = 0, red = 0, re1 = 0, re2 = 0, re3 = 0;
    if (idx == index_id::ireci) {
        red = slab.band_pos(band_id::B04);
        re1 = slab.band_pos(band_id::B05);
        re2 = slab.band_pos(band_id::B06);
        re3 = slab.band_pos(band_id::B07);
    } else {
        nir = slab.band_pos(band_id::B08);
        red = slab.band_pos(band_id::B04);
    }

    index_slab out;
    out.times = slab.times();
    out.height = slab.height();
    out.width = slab.width();
    out.values.assign(out.times * out.height * out.width, nan);

    bool any = false;
    for (std::size_t t = 0; t < out.times; ++t) {
        for (std::size_t y = 0; y < out.height; ++y) {
            for (std::size_t x = 0; x < out.width; ++x) {
                double v = nan;
                switch (idx) {
                    case index_id::ndvi:
                        v = ndvi_of(slab.reflectance(t, nir, y, x),
                                    slab.reflectance(t, red, y, x));
                        break;
                    case index_id::nirv: {
                        const double n = slab.reflectance(t, nir, y, x);
                        v = ndvi_of(n, slab.reflectance(t, red, y, x)) * n;
                        break;
                    }
                    case index_id::kndvi: {
                        const double n = ndvi_of(slab.reflectance(t, nir, y, x),
                                                 slab.reflectance(t, red, y, x));
                        v = std::isnan(n) ? nan : std::tanh(n * n);
                        break;
                    }
                    case index_id::ireci: {
                        const double r = slab.reflectance(t, red, y, x);
                        const double e1 = slab.reflectance(t, re1, y, x);
                        const double e2 = slab.reflectance(t, re2, y, x);
                        const double e3 = slab.reflectance(t, re3, y, x);
                        if (std::isnan(r) || std::isnan(e1) || std::isnan(e2) ||
                            std::isnan(e3) || e2 == 0.0) {
                            break;  // stays nodata
                        }
                        const double denom = e1 / e2;
                        if (denom == 0.0) break;
                        v = (e3 - r) / denom;
                        break;
                    }
                }
                if (!std::isnan(v)) any = true;
                out.at(t, y, x) = v;
            }
        }
    }
    if (!any) {
        fail(errc::all_nodata,
             std::string(index_name(idx)) + ": every pixel of the input is nodata");
    }
    return out;
}

delta_psi_result delta_psi(const index_slab& index_nbar, const index_slab& index_sr) {
    if (index_nbar.times != index_sr.times || index_nbar.height != index_sr.height ||
        index_nbar.width != index_sr.width) {
        fail(errc::dimension_mismatch, "delta_psi inputs have different shapes");
    }

    delta_psi_result out;
    out.delta.times = index_nbar.times;
    out.delta.height = index_nbar.height;
    out.delta.width = index_nbar.width;
    out.delta.values.assign(index_nbar.values.size(), nan);
    out.stats.resize(index_nbar.times);

    for (std::size_t t = 0; t < index_nbar.times; ++t) {
        double lo = nan, hi = nan;
        for (std::size_t y = 0; y < index_nbar.height; ++y) {
            for (std::size_t x = 0; x < index_nbar.width; ++x) {
                const double d = index_nbar.at(t, y, x) - index_sr.at(t, y, x);
                out.delta.at(t, y, x) = d;
                if (std::isnan(d)) continue;
                if (std::isnan(lo) || d < lo) lo = d;
                if (std::isnan(hi) || d > hi) hi = d;
            }
        }
        out.stats[t] = {t, lo, hi};
    }
    return out;
}

std::string delta_psi_stats_csv(const std::vector<delta_psi_stats>& stats, index_id idx) {
    std::string out;
    char line[96];
    for (const delta_psi_stats& s : stats) {
        std::snprintf(line, sizeof(line), "%zu,%s,%.12g,%.12g\n", s.timestep,
                      std::string(index_name(idx)).c_str(), s.min, s.max);
        out += line;
    }
    return out;
}

}  // namespace s2nbar
