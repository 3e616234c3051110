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

#ifndef S2NBAR_UTM_HPP
#define S2NBAR_UTM_HPP

#include <optional>

namespace s2nbar {

/// One WGS84 UTM zone. Only the EPSG 326xx/327xx families are supported.
struct utm_zone {
    int zone;    // 1..60
    bool north;  // EPSG 326xx when true, 327xx when false

    double central_meridian_deg() const { return zone * 6.0 - 183.0; }
    double false_northing() const { return north ? 0.0 : 10000000.0; }
};

std::optional<utm_zone> utm_zone_from_epsg(int epsg);

/// Throws unsupported_crs with a descriptive message for non-UTM codes.
utm_zone require_utm_zone(int epsg);

/// Forward projection, WGS84 geographic (degrees) to zone coordinates
/// (meters). Karney-style transverse-Mercator series, order n^6; error is far
/// below a millimeter anywhere a Sentinel-2 tile can land.
void geographic_to_utm(const utm_zone& zone, double lat_deg, double lon_deg, double& easting,
                       double& northing);

/// Inverse projection, zone coordinates (meters) to WGS84 degrees.
void utm_to_geographic(const utm_zone& zone, double easting, double northing, double& lat_deg,
                       double& lon_deg);

}  // namespace s2nbar

#endif
