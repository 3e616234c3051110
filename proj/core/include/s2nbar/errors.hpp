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

#ifndef S2NBAR_ERRORS_HPP
#define S2NBAR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace s2nbar {

enum class errc {
    malformed_xml,
    missing_field,
    unparsable_baseline,
    grid_shape_mismatch,
    unknown_band_id,
    empty_input,
    domain_error,
    degenerate_brdf,
    missing_angles,
    empty_target,
    crs_mismatch,
    unsupported_crs,
    io_error,
    unsupported_raster_layout,
    missing_metadata,
    missing_band_raster,
    no_metadata_asset,
    http_error,
    malformed_item,
    dimension_mismatch,
    missing_band,
    all_nodata,
    usage_error,
};

const char* errc_name(errc code);

/// Exception carrying a machine-checkable error code next to the message.
class error : public std::runtime_error {
   public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), _code(code) {}

    errc code() const noexcept { return _code; }

   private:
    errc _code;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace s2nbar

#endif
