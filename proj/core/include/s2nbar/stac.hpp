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

#ifndef S2NBAR_STAC_HPP
#define S2NBAR_STAC_HPP

#include <chrono>
#include <filesystem>
#include <functional>
#include <string>

namespace s2nbar {

/// HTTP behavior knobs. The sleeper is injectable so tests can count
/// backoff calls without waiting out real seconds.
struct http_options {
    int max_retries = 3;  // retries after the first attempt (4 tries total)
    std::chrono::milliseconds backoff_base{1000};  // 1 s, then doubled each retry
    std::chrono::milliseconds timeout{30000};
    std::function<void(std::chrono::milliseconds)> sleeper;  // default: real sleep
};

/// GET with retry/backoff; returns the response body. http:// and https://
/// URLs only. Throws http_error once the retry budget is exhausted.
std::string http_get(const std::string& url, const http_options& options = {});

struct stac_fetch_result {
    std::string granule_xml;  // MTD_TL.xml bytes
    double baseline = 0;
    bool baseline_from_property = false;
};

/// Resolves an item's granule metadata asset (keys tried in order:
/// granule-metadata, granule_metadata, metadata) and the processing baseline
/// (item property "s2:processing_baseline" when present, otherwise the
/// product metadata asset: product-metadata, product_metadata). Asset hrefs
/// may be http(s) URLs or local paths; relative paths resolve against
/// base_dir. Throws malformed_item, no_metadata_asset or http_error.
stac_fetch_result fetch_stac_metadata(const std::string& item_json,
                                      const std::filesystem::path& base_dir = {},
                                      const http_options& options = {});

}  // namespace s2nbar

#endif
