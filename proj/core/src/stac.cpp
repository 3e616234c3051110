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

#include "s2nbar/stac.hpp"

#include <fstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "s2nbar/errors.hpp"
#include "s2nbar/metadata.hpp"

namespace s2nbar {

namespace {

using nlohmann::json;

constexpr const char* granule_asset_keys[] = {"granule-metadata", "granule_metadata",
                                              "metadata"};
constexpr const char* product_asset_keys[] = {"product-metadata", "product_metadata"};

bool is_url(const std::string& href) {
    return href.rfind("http://", 0) == 0 || href.rfind("https://", 0) == 0;
}

// scheme://host[:port] and /path split for httplib.
std::pair<std::string, std::string> split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

std::string read_local(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(errc::io_error, "cannot open " + path.string());
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

std::string fetch_href(const std::string& href, const std::filesystem::path& base_dir,
                       const http_options& options) {
    if (is_url(href)) return http_get(href, options);
    std::filesystem::path p(href);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    return read_local(p);
}

const json* find_asset(const json& assets, const char* const* keys, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const auto it = assets.find(keys[i]);
        if (it != assets.end()) return &*it;
    }
    return nullptr;
}

std::string asset_href(const json& asset) {
    const auto it = asset.find("href");
    if (it == asset.end() || !it->is_string()) {
        fail(errc::malformed_item, "asset has no href string");
    }
    return it->get<std::string>();
}

}  // namespace

std::string http_get(const std::string& url, const http_options& options) {
    if (!is_url(url)) fail(errc::http_error, "not an http(s) URL: " + url);
    const auto [base, path] = split_url(url);

    const auto sleeper = options.sleeper
                             ? options.sleeper
                             : [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };

    std::string last_error;
    for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
        if (attempt > 0) sleeper(options.backoff_base * (1 << (attempt - 1)));

        httplib::Client client(base);
        client.set_connection_timeout(options.timeout);
        client.set_read_timeout(options.timeout);
        client.set_follow_location(true);

        auto res = client.Get(path);
        if (res && res->status >= 200 && res->status < 300) return res->body;
        last_error = res ? "status " + std::to_string(res->status)
                         : "transport error (" + httplib::to_string(res.error()) + ")";
    }
    fail(errc::http_error, "GET " + url + " failed after " +
                               std::to_string(options.max_retries + 1) + " attempts: " +
                               last_error);
}

stac_fetch_result fetch_stac_metadata(const std::string& item_json,
                                      const std::filesystem::path& base_dir,
                                      const http_options& options) {
    json item;
    try {
        item = json::parse(item_json);
    } catch (const json::exception& e) {
        fail(errc::malformed_item, std::string("item is not valid JSON: ") + e.what());
    }
    const auto assets_it = item.find("assets");
    if (assets_it == item.end() || !assets_it->is_object()) {
        fail(errc::malformed_item, "item has no assets map");
    }

    const json* granule = find_asset(*assets_it, granule_asset_keys,
                                     std::size(granule_asset_keys));
    if (!granule) {
        fail(errc::no_metadata_asset,
             "no granule metadata asset under keys granule-metadata/granule_metadata/metadata");
    }

    stac_fetch_result out;
    out.granule_xml = fetch_href(asset_href(*granule), base_dir, options);

    // Property fast path: no product download needed.
    if (const auto props = item.find("properties"); props != item.end()) {
        const auto pb = props->find("s2:processing_baseline");
        if (pb != props->end()) {
            if (pb->is_number()) {
                out.baseline = pb->get<double>();
                out.baseline_from_property = true;
                return out;
            }
            if (pb->is_string()) {
                try {
                    out.baseline = std::stod(pb->get<std::string>());
                } catch (const std::exception&) {
                    fail(errc::malformed_item,
                         "s2:processing_baseline is not numeric: " + pb->get<std::string>());
                }
                out.baseline_from_property = true;
                return out;
            }
            fail(errc::malformed_item, "s2:processing_baseline has an unexpected type");
        }
    }

    const json* product = find_asset(*assets_it, product_asset_keys,
                                     std::size(product_asset_keys));
    if (!product) {
        fail(errc::no_metadata_asset,
             "no s2:processing_baseline property and no product metadata asset");
    }
    const std::string product_xml = fetch_href(asset_href(*product), base_dir, options);
    out.baseline = parse_product_metadata(product_xml);
    return out;
}

}  // namespace s2nbar
