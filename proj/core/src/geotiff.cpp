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

#include "s2nbar/geotiff.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <vector>

#include "s2nbar/errors.hpp"

namespace s2nbar {

namespace {

// TIFF tag ids used by this profile.
enum : std::uint16_t {
    tag_new_subfile_type = 254,
    tag_image_width = 256,
    tag_image_length = 257,
    tag_bits_per_sample = 258,
    tag_compression = 259,
    tag_photometric = 262,
    tag_strip_offsets = 273,
    tag_samples_per_pixel = 277,
    tag_rows_per_strip = 278,
    tag_strip_byte_counts = 279,
    tag_planar_config = 284,
    tag_tile_width = 322,
    tag_tile_length = 323,
    tag_tile_offsets = 324,
    tag_tile_byte_counts = 325,
    tag_sample_format = 339,
    tag_model_pixel_scale = 33550,
    tag_model_tiepoint = 33922,
    tag_model_transformation = 34264,
    tag_geo_key_directory = 34735,
    tag_gdal_nodata = 42113,
};

enum : std::uint16_t {
    type_ascii = 2,
    type_short = 3,
    type_long = 4,
    type_double = 12,
};

enum : std::uint16_t {
    compression_none = 1,
    compression_deflate = 8,
    compression_deflate_legacy = 32946,
};

constexpr std::uint32_t cog_tile_size = 512;
constexpr std::uint32_t strip_rows = 512;
constexpr int overview_factors[] = {2, 4, 8};

std::size_t type_size(std::uint16_t type) {
    switch (type) {
        case type_ascii: return 1;
        case type_short: return 2;
        case type_long: return 4;
        case type_double: return 8;
        default: return 0;
    }
}

// ---------------------------------------------------------------- writing --

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    put16(out, static_cast<std::uint16_t>(v & 0xffff));
    put16(out, static_cast<std::uint16_t>(v >> 16));
}

struct tag_value {
    std::uint16_t tag = 0;
    std::uint16_t type = 0;
    std::vector<std::uint8_t> bytes;  // little-endian payload
    std::uint32_t count = 0;
};

tag_value make_shorts(std::uint16_t tag, std::initializer_list<std::uint16_t> vals) {
    tag_value t{tag, type_short, {}, static_cast<std::uint32_t>(vals.size())};
    for (std::uint16_t v : vals) put16(t.bytes, v);
    return t;
}

tag_value make_longs(std::uint16_t tag, const std::vector<std::uint32_t>& vals) {
    tag_value t{tag, type_long, {}, static_cast<std::uint32_t>(vals.size())};
    for (std::uint32_t v : vals) put32(t.bytes, v);
    return t;
}

tag_value make_long(std::uint16_t tag, std::uint32_t v) { return make_longs(tag, {v}); }

tag_value make_doubles(std::uint16_t tag, const std::vector<double>& vals) {
    tag_value t{tag, type_double, {}, static_cast<std::uint32_t>(vals.size())};
    for (double v : vals) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        put32(t.bytes, static_cast<std::uint32_t>(bits & 0xffffffffu));
        put32(t.bytes, static_cast<std::uint32_t>(bits >> 32));
    }
    return t;
}

tag_value make_ascii(std::uint16_t tag, const std::string& text) {
    tag_value t{tag, type_ascii, {}, static_cast<std::uint32_t>(text.size() + 1)};
    t.bytes.assign(text.begin(), text.end());
    t.bytes.push_back(0);
    return t;
}

std::vector<std::uint8_t> deflate_block(const std::uint8_t* src, std::size_t len) {
    uLongf bound = compressBound(static_cast<uLong>(len));
    std::vector<std::uint8_t> out(bound);
    if (compress2(out.data(), &bound, src, static_cast<uLong>(len), 6) != Z_OK) {
        fail(errc::io_error, "deflate failed");
    }
    out.resize(bound);
    return out;
}

// One image (full resolution or overview) prepared for serialization.
struct plane {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    bool reduced = false;
    bool tiled = false;
    std::vector<tag_value> extra;                  // geokeys etc., IFD0 only
    std::vector<std::vector<std::uint8_t>> blocks;  // compressed strip/tile data
    std::vector<std::uint32_t> block_sizes;
};

template <typename T>
void split_blocks(plane& p, const grid2d<T>& data) {
    const std::size_t pixel = sizeof(T);
    if (p.tiled) {
        const std::uint32_t across = (p.width + cog_tile_size - 1) / cog_tile_size;
        const std::uint32_t down = (p.height + cog_tile_size - 1) / cog_tile_size;
        std::vector<std::uint8_t> tile(cog_tile_size * cog_tile_size * pixel);
        for (std::uint32_t tj = 0; tj < down; ++tj) {
            for (std::uint32_t ti = 0; ti < across; ++ti) {
                std::fill(tile.begin(), tile.end(), 0);
                const std::uint32_t x0 = ti * cog_tile_size;
                const std::uint32_t y0 = tj * cog_tile_size;
                const std::uint32_t w = std::min(cog_tile_size, p.width - x0);
                const std::uint32_t h = std::min(cog_tile_size, p.height - y0);
                for (std::uint32_t r = 0; r < h; ++r) {
                    std::memcpy(tile.data() + r * cog_tile_size * pixel,
                                &data(y0 + r, x0), w * pixel);
                }
                p.blocks.push_back(deflate_block(tile.data(), tile.size()));
            }
        }
    } else {
        const std::uint32_t strips = (p.height + strip_rows - 1) / strip_rows;
        for (std::uint32_t s = 0; s < strips; ++s) {
            const std::uint32_t y0 = s * strip_rows;
            const std::uint32_t rows = std::min(strip_rows, p.height - y0);
            const auto* src = reinterpret_cast<const std::uint8_t*>(&data(y0, 0));
            p.blocks.push_back(deflate_block(src, std::size_t(rows) * p.width * pixel));
        }
    }
    for (const auto& b : p.blocks) p.block_sizes.push_back(static_cast<std::uint32_t>(b.size()));
}

std::vector<tag_value> plane_tags(const plane& p, std::uint16_t bits, std::uint16_t format,
                                  const std::vector<std::uint32_t>& offsets) {
    std::vector<tag_value> tags;
    if (p.reduced) tags.push_back(make_long(tag_new_subfile_type, 1));
    tags.push_back(make_long(tag_image_width, p.width));
    tags.push_back(make_long(tag_image_length, p.height));
    tags.push_back(make_shorts(tag_bits_per_sample, {bits}));
    tags.push_back(make_shorts(tag_compression, {compression_deflate}));
    tags.push_back(make_shorts(tag_photometric, {1}));
    if (p.tiled) {
        tags.push_back(make_long(tag_tile_width, cog_tile_size));
        tags.push_back(make_long(tag_tile_length, cog_tile_size));
        tags.push_back(make_longs(tag_tile_offsets, offsets));
        tags.push_back(make_longs(tag_tile_byte_counts, p.block_sizes));
    } else {
        tags.push_back(make_longs(tag_strip_offsets, offsets));
        tags.push_back(make_long(tag_rows_per_strip, strip_rows));
        tags.push_back(make_longs(tag_strip_byte_counts, p.block_sizes));
    }
    tags.push_back(make_shorts(tag_samples_per_pixel, {1}));
    tags.push_back(make_shorts(tag_planar_config, {1}));
    tags.push_back(make_shorts(tag_sample_format, {format}));
    for (const tag_value& t : p.extra) tags.push_back(t);
    std::sort(tags.begin(), tags.end(),
              [](const tag_value& a, const tag_value& b) { return a.tag < b.tag; });
    return tags;
}

std::vector<tag_value> geo_tags(const geo_transform& t, const std::string& nodata_text) {
    std::vector<tag_value> tags;
    tags.push_back(make_doubles(tag_model_pixel_scale, {t.pixel_w, t.pixel_h, 0.0}));
    tags.push_back(
        make_doubles(tag_model_tiepoint, {0.0, 0.0, 0.0, t.origin_x, t.origin_y, 0.0}));
    // GTModelType=projected, GTRasterType=area, ProjectedCSType=EPSG
    tags.push_back(make_shorts(tag_geo_key_directory,
                               {1, 1, 0, 3,  //
                                1024, 0, 1, 1,  //
                                1025, 0, 1, 1,  //
                                3072, 0, 1, static_cast<std::uint16_t>(t.epsg)}));
    tags.push_back(make_ascii(tag_gdal_nodata, nodata_text));
    return tags;
}

// Serializes header + IFD chain + out-of-line values + pixel blocks.
// IFDs and tag arrays come first so the layout is range-read friendly.
void write_tiff(const std::filesystem::path& path, std::vector<plane>& planes,
                std::uint16_t bits, std::uint16_t format) {
    const std::size_t pixel = bits / 8;

    // First pass with dummy offsets to learn each IFD's serialized size.
    std::vector<std::size_t> ifd_sizes, value_sizes;
    for (plane& p : planes) {
        const auto tags =
            plane_tags(p, bits, format, std::vector<std::uint32_t>(p.blocks.size(), 0));
        ifd_sizes.push_back(2 + tags.size() * 12 + 4);
        std::size_t oversize = 0;
        for (const auto& t : tags) {
            if (t.bytes.size() > 4) oversize += (t.bytes.size() + 1) & ~std::size_t(1);
        }
        value_sizes.push_back(oversize);
    }

    std::size_t pos = 8;
    std::vector<std::size_t> ifd_at(planes.size()), values_at(planes.size());
    for (std::size_t i = 0; i < planes.size(); ++i) {
        ifd_at[i] = pos;
        pos += ifd_sizes[i];
        values_at[i] = pos;
        pos += value_sizes[i];
    }
    std::size_t data_at = (pos + 1) & ~std::size_t(1);

    if (data_at > std::numeric_limits<std::uint32_t>::max()) {
        fail(errc::io_error, "raster too large for classic TIFF");
    }

    // Assign block offsets.
    std::vector<std::vector<std::uint32_t>> block_offsets(planes.size());
    std::size_t cursor = data_at;
    for (std::size_t i = 0; i < planes.size(); ++i) {
        for (const auto& b : planes[i].blocks) {
            block_offsets[i].push_back(static_cast<std::uint32_t>(cursor));
            cursor += (b.size() + 1) & ~std::size_t(1);
            if (cursor > std::numeric_limits<std::uint32_t>::max()) {
                fail(errc::io_error, "raster too large for classic TIFF");
            }
        }
    }

    std::vector<std::uint8_t> out;
    out.reserve(cursor);
    out.push_back('I');
    out.push_back('I');
    put16(out, 42);
    put32(out, static_cast<std::uint32_t>(ifd_at[0]));

    for (std::size_t i = 0; i < planes.size(); ++i) {
        const auto tags = plane_tags(planes[i], bits, format, block_offsets[i]);
        put16(out, static_cast<std::uint16_t>(tags.size()));
        std::size_t value_cursor = values_at[i];
        for (const auto& t : tags) {
            put16(out, t.tag);
            put16(out, t.type);
            put32(out, t.count);
            if (t.bytes.size() <= 4) {
                std::size_t at = out.size();
                out.insert(out.end(), t.bytes.begin(), t.bytes.end());
                out.resize(at + 4, 0);
            } else {
                put32(out, static_cast<std::uint32_t>(value_cursor));
                value_cursor += (t.bytes.size() + 1) & ~std::size_t(1);
            }
        }
        put32(out, i + 1 < planes.size() ? static_cast<std::uint32_t>(ifd_at[i + 1]) : 0u);
        // out-of-line values
        for (const auto& t : tags) {
            if (t.bytes.size() > 4) {
                out.insert(out.end(), t.bytes.begin(), t.bytes.end());
                if (out.size() & 1) out.push_back(0);
            }
        }
    }
    out.resize(data_at, 0);
    for (std::size_t i = 0; i < planes.size(); ++i) {
        for (const auto& b : planes[i].blocks) {
            out.insert(out.end(), b.begin(), b.end());
            if (out.size() & 1) out.push_back(0);
        }
    }
    (void)pixel;

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) fail(errc::io_error, "cannot open " + path.string() + " for writing");
    f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!f) fail(errc::io_error, "short write to " + path.string());
}

grid2d<std::uint16_t> downsample_2x2(const grid2d<std::uint16_t>& src, std::uint16_t nodata) {
    grid2d<std::uint16_t> dst((src.rows() + 1) / 2, (src.cols() + 1) / 2);
    for (std::size_t r = 0; r < dst.rows(); ++r) {
        for (std::size_t c = 0; c < dst.cols(); ++c) {
            double sum = 0;
            int n = 0;
            for (std::size_t dr = 0; dr < 2; ++dr) {
                for (std::size_t dc = 0; dc < 2; ++dc) {
                    const std::size_t rr = 2 * r + dr, cc = 2 * c + dc;
                    if (rr >= src.rows() || cc >= src.cols()) continue;
                    if (src(rr, cc) == nodata) continue;
                    sum += src(rr, cc);
                    ++n;
                }
            }
            dst(r, c) = n ? static_cast<std::uint16_t>(std::lround(sum / n)) : nodata;
        }
    }
    return dst;
}

grid2d<float> downsample_2x2(const grid2d<float>& src) {
    grid2d<float> dst((src.rows() + 1) / 2, (src.cols() + 1) / 2,
                      std::numeric_limits<float>::quiet_NaN());
    for (std::size_t r = 0; r < dst.rows(); ++r) {
        for (std::size_t c = 0; c < dst.cols(); ++c) {
            double sum = 0;
            int n = 0;
            for (std::size_t dr = 0; dr < 2; ++dr) {
                for (std::size_t dc = 0; dc < 2; ++dc) {
                    const std::size_t rr = 2 * r + dr, cc = 2 * c + dc;
                    if (rr >= src.rows() || cc >= src.cols()) continue;
                    if (std::isnan(src(rr, cc))) continue;
                    sum += src(rr, cc);
                    ++n;
                }
            }
            if (n) dst(r, c) = static_cast<float>(sum / n);
        }
    }
    return dst;
}

template <typename T>
void write_single_band(const grid2d<T>& data, const geo_transform& transform,
                       const std::string& nodata_text, const std::filesystem::path& path,
                       raster_format format, std::uint16_t sample_format, T nodata_value) {
    if (data.empty()) fail(errc::empty_target, "refusing to write an empty raster");
    if (!(transform.pixel_w > 0) || !(transform.pixel_h > 0)) {
        fail(errc::unsupported_raster_layout, "pixel size must be positive");
    }

    std::vector<plane> planes;
    std::vector<grid2d<T>> levels;  // keeps overview storage alive
    {
        plane full;
        full.width = static_cast<std::uint32_t>(data.cols());
        full.height = static_cast<std::uint32_t>(data.rows());
        full.tiled = format == raster_format::cog;
        full.extra = geo_tags(transform, nodata_text);
        split_blocks(full, data);
        planes.push_back(std::move(full));
    }
    if (format == raster_format::cog) {
        const grid2d<T>* prev = &data;
        for (int factor : overview_factors) {
            (void)factor;  // each level halves the previous one
            if constexpr (std::is_same_v<T, std::uint16_t>) {
                levels.push_back(downsample_2x2(*prev, nodata_value));
            } else {
                levels.push_back(downsample_2x2(*prev));
            }
            prev = &levels.back();
            plane ov;
            ov.width = static_cast<std::uint32_t>(prev->cols());
            ov.height = static_cast<std::uint32_t>(prev->rows());
            ov.reduced = true;
            ov.tiled = true;
            split_blocks(ov, *prev);
            planes.push_back(std::move(ov));
        }
    }
    write_tiff(path, planes, sizeof(T) * 8, sample_format);
}

// ---------------------------------------------------------------- reading --

struct reader {
    std::vector<std::uint8_t> bytes;
    const std::filesystem::path& path;

    std::uint16_t u16(std::size_t at) const {
        if (at + 2 > bytes.size()) fail(errc::io_error, "truncated TIFF: " + path.string());
        return static_cast<std::uint16_t>(bytes[at] | (bytes[at + 1] << 8));
    }
    std::uint32_t u32(std::size_t at) const {
        if (at + 4 > bytes.size()) fail(errc::io_error, "truncated TIFF: " + path.string());
        return static_cast<std::uint32_t>(bytes[at]) | (std::uint32_t(bytes[at + 1]) << 8) |
               (std::uint32_t(bytes[at + 2]) << 16) | (std::uint32_t(bytes[at + 3]) << 24);
    }
    double f64(std::size_t at) const {
        if (at + 8 > bytes.size()) fail(errc::io_error, "truncated TIFF: " + path.string());
        std::uint64_t bits = std::uint64_t(u32(at)) | (std::uint64_t(u32(at + 4)) << 32);
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
};

struct ifd_entry {
    std::uint16_t type = 0;
    std::uint32_t count = 0;
    std::size_t value_at = 0;  // absolute offset of the payload
};

using ifd_map = std::map<std::uint16_t, ifd_entry>;

ifd_map parse_ifd(const reader& r, std::size_t at, std::size_t& next) {
    const std::uint16_t n = r.u16(at);
    ifd_map out;
    for (std::uint16_t i = 0; i < n; ++i) {
        const std::size_t e = at + 2 + std::size_t(i) * 12;
        ifd_entry entry;
        const std::uint16_t tag = r.u16(e);
        entry.type = r.u16(e + 2);
        entry.count = r.u32(e + 4);
        const std::size_t payload = type_size(entry.type) * entry.count;
        entry.value_at = payload <= 4 ? e + 8 : r.u32(e + 8);
        out[tag] = entry;
    }
    next = r.u32(at + 2 + std::size_t(n) * 12);
    return out;
}

std::uint32_t scalar(const reader& r, const ifd_map& ifd, std::uint16_t tag,
                     std::uint32_t fallback, bool required = false) {
    const auto it = ifd.find(tag);
    if (it == ifd.end()) {
        if (required) {
            fail(errc::unsupported_raster_layout,
                 "missing TIFF tag " + std::to_string(tag) + " in " + r.path.string());
        }
        return fallback;
    }
    if (it->second.type == type_short) return r.u16(it->second.value_at);
    return r.u32(it->second.value_at);
}

std::vector<std::uint32_t> long_array(const reader& r, const ifd_map& ifd, std::uint16_t tag) {
    const auto it = ifd.find(tag);
    if (it == ifd.end()) return {};
    std::vector<std::uint32_t> out(it->second.count);
    for (std::uint32_t i = 0; i < it->second.count; ++i) {
        out[i] = it->second.type == type_short
                     ? r.u16(it->second.value_at + std::size_t(i) * 2)
                     : r.u32(it->second.value_at + std::size_t(i) * 4);
    }
    return out;
}

std::vector<double> double_array(const reader& r, const ifd_map& ifd, std::uint16_t tag) {
    const auto it = ifd.find(tag);
    if (it == ifd.end() || it->second.type != type_double) return {};
    std::vector<double> out(it->second.count);
    for (std::uint32_t i = 0; i < it->second.count; ++i) {
        out[i] = r.f64(it->second.value_at + std::size_t(i) * 8);
    }
    return out;
}

std::string ascii_tag(const reader& r, const ifd_map& ifd, std::uint16_t tag) {
    const auto it = ifd.find(tag);
    if (it == ifd.end() || it->second.count == 0) return {};
    const std::size_t at = it->second.value_at;
    if (at + it->second.count > r.bytes.size()) return {};
    std::string s(reinterpret_cast<const char*>(r.bytes.data() + at), it->second.count);
    while (!s.empty() && (s.back() == '\0' || s.back() == ' ')) s.pop_back();
    return s;
}

geo_transform read_transform(const reader& r, const ifd_map& ifd) {
    geo_transform t;
    const auto matrix = double_array(r, ifd, tag_model_transformation);
    if (matrix.size() == 16) {
        if (matrix[1] != 0.0 || matrix[4] != 0.0 || matrix[0] <= 0.0 || matrix[5] >= 0.0) {
            fail(errc::unsupported_raster_layout,
                 "rotated or flipped geotransform in " + r.path.string());
        }
        t.pixel_w = matrix[0];
        t.pixel_h = -matrix[5];
        t.origin_x = matrix[3];
        t.origin_y = matrix[7];
    } else {
        const auto scale = double_array(r, ifd, tag_model_pixel_scale);
        const auto tie = double_array(r, ifd, tag_model_tiepoint);
        if (scale.size() >= 2 && tie.size() >= 6) {
            t.pixel_w = scale[0];
            t.pixel_h = scale[1];
            t.origin_x = tie[3] - tie[0] * scale[0];
            t.origin_y = tie[4] + tie[1] * scale[1];
        } else {
            fail(errc::unsupported_raster_layout,
                 "no geotransform tags in " + r.path.string());
        }
        if (!(t.pixel_w > 0) || !(t.pixel_h > 0)) {
            fail(errc::unsupported_raster_layout, "invalid pixel scale in " + r.path.string());
        }
    }

    const auto it = ifd.find(tag_geo_key_directory);
    if (it != ifd.end()) {
        const std::uint32_t keys = it->second.count / 4;
        for (std::uint32_t k = 1; k < keys; ++k) {
            const std::size_t at = it->second.value_at + std::size_t(k) * 8;
            if (r.u16(at) == 3072 && r.u16(at + 2) == 0) t.epsg = r.u16(at + 6);
        }
    }
    return t;
}

std::vector<std::uint8_t> read_block(const reader& r, std::uint32_t offset, std::uint32_t size,
                                     std::size_t raw_size, std::uint16_t compression) {
    if (std::size_t(offset) + size > r.bytes.size()) {
        fail(errc::io_error, "block outside file: " + r.path.string());
    }
    if (compression == compression_none) {
        if (size < raw_size) fail(errc::io_error, "short block in " + r.path.string());
        return {r.bytes.begin() + offset, r.bytes.begin() + offset + raw_size};
    }
    std::vector<std::uint8_t> out(raw_size);
    uLongf len = static_cast<uLongf>(raw_size);
    if (uncompress(out.data(), &len, r.bytes.data() + offset, size) != Z_OK ||
        len != raw_size) {
        fail(errc::io_error, "bad deflate block in " + r.path.string());
    }
    return out;
}

template <typename T>
grid2d<T> read_pixels(const reader& r, const ifd_map& ifd, std::uint32_t width,
                      std::uint32_t height, std::uint16_t compression) {
    grid2d<T> data(height, width);
    const std::size_t pixel = sizeof(T);

    if (ifd.count(tag_tile_offsets)) {
        const std::uint32_t tw = scalar(r, ifd, tag_tile_width, 0, true);
        const std::uint32_t th = scalar(r, ifd, tag_tile_length, 0, true);
        if (tw == 0 || th == 0) fail(errc::io_error, "zero tile size in " + r.path.string());
        const auto offsets = long_array(r, ifd, tag_tile_offsets);
        const auto counts = long_array(r, ifd, tag_tile_byte_counts);
        const std::uint32_t across = (width + tw - 1) / tw;
        const std::uint32_t down = (height + th - 1) / th;
        if (offsets.size() != std::size_t(across) * down || counts.size() != offsets.size()) {
            fail(errc::io_error, "tile index mismatch in " + r.path.string());
        }
        for (std::uint32_t tj = 0; tj < down; ++tj) {
            for (std::uint32_t ti = 0; ti < across; ++ti) {
                const std::size_t k = std::size_t(tj) * across + ti;
                const auto block =
                    read_block(r, offsets[k], counts[k], std::size_t(tw) * th * pixel,
                               compression);
                const std::uint32_t w = std::min(tw, width - ti * tw);
                const std::uint32_t h = std::min(th, height - tj * th);
                for (std::uint32_t row = 0; row < h; ++row) {
                    std::memcpy(&data(tj * th + row, ti * tw),
                                block.data() + std::size_t(row) * tw * pixel, w * pixel);
                }
            }
        }
        return data;
    }

    const auto offsets = long_array(r, ifd, tag_strip_offsets);
    const auto counts = long_array(r, ifd, tag_strip_byte_counts);
    if (offsets.empty()) {
        fail(errc::unsupported_raster_layout, "no strip or tile layout in " + r.path.string());
    }
    const std::uint32_t rps = scalar(r, ifd, tag_rows_per_strip, height);
    const std::uint32_t strips = (height + rps - 1) / rps;
    if (offsets.size() != strips || counts.size() != strips) {
        fail(errc::io_error, "strip index mismatch in " + r.path.string());
    }
    for (std::uint32_t s = 0; s < strips; ++s) {
        const std::uint32_t y0 = s * rps;
        const std::uint32_t rows = std::min(rps, height - y0);
        const auto block =
            read_block(r, offsets[s], counts[s], std::size_t(rows) * width * pixel, compression);
        std::memcpy(&data(y0, 0), block.data(), block.size());
    }
    return data;
}

struct open_result {
    reader r;
    ifd_map ifd;
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::uint16_t compression = 0;
    std::uint16_t bits = 0;
    std::uint16_t sample_format = 1;
};

open_result open_tiff(const std::filesystem::path& path, std::vector<std::uint8_t>&& bytes) {
    open_result o{reader{std::move(bytes), path}, {}, 0, 0, 0, 0, 1};
    if (o.r.bytes.size() < 8) fail(errc::io_error, "not a TIFF: " + path.string());
    if (o.r.bytes[0] == 'M' && o.r.bytes[1] == 'M') {
        fail(errc::unsupported_raster_layout, "big-endian TIFF not supported: " + path.string());
    }
    if (o.r.bytes[0] != 'I' || o.r.bytes[1] != 'I' || o.r.u16(2) != 42) {
        fail(errc::io_error, "not a little-endian TIFF: " + path.string());
    }
    std::size_t next = 0;
    o.ifd = parse_ifd(o.r, o.r.u32(4), next);

    o.width = scalar(o.r, o.ifd, tag_image_width, 0, true);
    o.height = scalar(o.r, o.ifd, tag_image_length, 0, true);
    o.compression = static_cast<std::uint16_t>(scalar(o.r, o.ifd, tag_compression, 1));
    if (o.compression == compression_deflate_legacy) o.compression = compression_deflate;
    if (o.compression != compression_none && o.compression != compression_deflate) {
        fail(errc::unsupported_raster_layout,
             "compression " + std::to_string(o.compression) + " not supported: " +
                 path.string());
    }
    if (scalar(o.r, o.ifd, tag_samples_per_pixel, 1) != 1 ||
        scalar(o.r, o.ifd, tag_planar_config, 1) != 1) {
        fail(errc::unsupported_raster_layout, "multi-sample TIFF not supported: " + path.string());
    }
    o.bits = static_cast<std::uint16_t>(scalar(o.r, o.ifd, tag_bits_per_sample, 0, true));
    o.sample_format = static_cast<std::uint16_t>(scalar(o.r, o.ifd, tag_sample_format, 1));
    return o;
}

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary | std::ios::ate);
    if (!f) fail(errc::io_error, "cannot open " + path.string());
    const std::streamsize size = f.tellg();
    f.seekg(0);
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
    f.read(reinterpret_cast<char*>(bytes.data()), size);
    if (!f) fail(errc::io_error, "short read from " + path.string());
    return bytes;
}

}  // namespace

band_raster read_band_raster(const std::filesystem::path& path) {
    open_result o = open_tiff(path, slurp(path));
    if (o.bits != 16 || o.sample_format != 1) {
        fail(errc::unsupported_raster_layout,
             "expected uint16 samples in " + path.string() + ", got " + std::to_string(o.bits) +
                 "-bit format " + std::to_string(o.sample_format));
    }
    band_raster out;
    out.transform = read_transform(o.r, o.ifd);
    out.data = read_pixels<std::uint16_t>(o.r, o.ifd, o.width, o.height, o.compression);
    const std::string nodata = ascii_tag(o.r, o.ifd, tag_gdal_nodata);
    out.nodata = nodata.empty() ? nodata_dn
                                : static_cast<std::uint16_t>(std::strtoul(nodata.c_str(),
                                                                          nullptr, 10));
    return out;
}

void write_band_raster(const band_raster& raster, const std::filesystem::path& path,
                       raster_format format) {
    write_single_band(raster.data, raster.transform, std::to_string(raster.nodata), path,
                      format, /*sample_format=*/1, raster.nodata);
}

float_raster read_float_raster(const std::filesystem::path& path) {
    open_result o = open_tiff(path, slurp(path));
    if (o.bits != 32 || o.sample_format != 3) {
        fail(errc::unsupported_raster_layout,
             "expected float32 samples in " + path.string());
    }
    float_raster out;
    out.transform = read_transform(o.r, o.ifd);
    out.data = read_pixels<float>(o.r, o.ifd, o.width, o.height, o.compression);
    return out;
}

void write_float_raster(const float_raster& raster, const std::filesystem::path& path,
                        raster_format format) {
    write_single_band(raster.data, raster.transform, "nan", path, format, /*sample_format=*/3,
                      std::numeric_limits<float>::quiet_NaN());
}

}  // namespace s2nbar
