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

#include "s2nbar/utm.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "s2nbar/errors.hpp"

namespace s2nbar {

namespace {

constexpr double pi = std::numbers::pi;

// WGS84
constexpr double semi_major_a = 6378137.0;
constexpr double flattening = 1.0 / 298.257223563;
constexpr double third_flattening = flattening / (2.0 - flattening);  // n
const double eccentricity = std::sqrt(flattening * (2.0 - flattening));

constexpr double utm_scale = 0.9996;
constexpr double false_easting = 500000.0;

// Krueger series in the third flattening, order n^6.
struct tm_series {
    double rectifying_radius;  // k0 * A
    double alpha[6];
    double beta[6];
};

const tm_series& series() {
    static const tm_series s = [] {
        const double n = third_flattening;
        const double n2 = n * n, n3 = n2 * n, n4 = n3 * n, n5 = n4 * n, n6 = n5 * n;
        tm_series t;
        const double a_rect =
            semi_major_a / (1.0 + n) * (1.0 + n2 / 4.0 + n4 / 64.0 + n6 / 256.0);
        t.rectifying_radius = utm_scale * a_rect;

        t.alpha[0] = n / 2.0 - 2.0 / 3.0 * n2 + 5.0 / 16.0 * n3 + 41.0 / 180.0 * n4 -
                     127.0 / 288.0 * n5 + 7891.0 / 37800.0 * n6;
        t.alpha[1] = 13.0 / 48.0 * n2 - 3.0 / 5.0 * n3 + 557.0 / 1440.0 * n4 +
                     281.0 / 630.0 * n5 - 1983433.0 / 1935360.0 * n6;
        t.alpha[2] = 61.0 / 240.0 * n3 - 103.0 / 140.0 * n4 + 15061.0 / 26880.0 * n5 +
                     167603.0 / 181440.0 * n6;
        t.alpha[3] =
            49561.0 / 161280.0 * n4 - 179.0 / 168.0 * n5 + 6601661.0 / 7257600.0 * n6;
        t.alpha[4] = 34729.0 / 80640.0 * n5 - 3418889.0 / 1995840.0 * n6;
        t.alpha[5] = 212378941.0 / 319334400.0 * n6;

        t.beta[0] = n / 2.0 - 2.0 / 3.0 * n2 + 37.0 / 96.0 * n3 - 1.0 / 360.0 * n4 -
                    81.0 / 512.0 * n5 + 96199.0 / 604800.0 * n6;
        t.beta[1] = 1.0 / 48.0 * n2 + 1.0 / 15.0 * n3 - 437.0 / 1440.0 * n4 +
                    46.0 / 105.0 * n5 - 1118711.0 / 3870720.0 * n6;
        t.beta[2] = 17.0 / 480.0 * n3 - 37.0 / 840.0 * n4 - 209.0 / 4480.0 * n5 +
                    5569.0 / 90720.0 * n6;
        t.beta[3] =
            4397.0 / 161280.0 * n4 - 11.0 / 504.0 * n5 - 830251.0 / 7257600.0 * n6;
        t.beta[4] = 4583.0 / 161280.0 * n5 - 108847.0 / 3991680.0 * n6;
        t.beta[5] = 20648693.0 / 638668800.0 * n6;
        return t;
    }();
    return s;
}

// tan of the conformal latitude for tan(phi) = tau.
double conformal_tan(double tau, double es) {
    const double tau1 = std::hypot(1.0, tau);
    const double sig = std::sinh(es * std::atanh(es * tau / tau1));
    return std::hypot(1.0, sig) * tau - sig * tau1;
}

// Inverts conformal_tan by Newton iteration (converges in 2-3 steps).
double inverse_conformal_tan(double taup, double es) {
    const double e2m = 1.0 - es * es;
    double tau = taup / e2m;
    const double stol = 1e-13 * std::max(1.0, std::fabs(taup));
    for (int i = 0; i < 8; ++i) {
        const double taupa = conformal_tan(tau, es);
        const double dtau = (taup - taupa) * (1.0 + e2m * tau * tau) /
                            (e2m * std::hypot(1.0, tau) * std::hypot(1.0, taupa));
        tau += dtau;
        if (std::fabs(dtau) < stol) break;
    }
    return tau;
}

}  // namespace

std::optional<utm_zone> utm_zone_from_epsg(int epsg) {
    if (epsg >= 32601 && epsg <= 32660) return utm_zone{epsg - 32600, true};
    if (epsg >= 32701 && epsg <= 32760) return utm_zone{epsg - 32700, false};
    return std::nullopt;
}

utm_zone require_utm_zone(int epsg) {
    const auto zone = utm_zone_from_epsg(epsg);
    if (!zone) {
        fail(errc::unsupported_crs,
             "EPSG:" + std::to_string(epsg) + " is not a WGS84 UTM zone (326xx/327xx)");
    }
    return *zone;
}

void geographic_to_utm(const utm_zone& zone, double lat_deg, double lon_deg, double& easting,
                       double& northing) {
    const tm_series& s = series();
    const double lat = lat_deg * pi / 180.0;
    double dlon = (lon_deg - zone.central_meridian_deg()) * pi / 180.0;
    dlon = std::remainder(dlon, 2.0 * pi);

    const double taup = conformal_tan(std::tan(lat), eccentricity);
    const double xi_p = std::atan2(taup, std::cos(dlon));
    const double eta_p = std::asinh(std::sin(dlon) / std::hypot(taup, std::cos(dlon)));

    double xi = xi_p;
    double eta = eta_p;
    for (int j = 1; j <= 6; ++j) {
        xi += s.alpha[j - 1] * std::sin(2.0 * j * xi_p) * std::cosh(2.0 * j * eta_p);
        eta += s.alpha[j - 1] * std::cos(2.0 * j * xi_p) * std::sinh(2.0 * j * eta_p);
    }
    easting = false_easting + s.rectifying_radius * eta;
    northing = zone.false_northing() + s.rectifying_radius * xi;
}

void utm_to_geographic(const utm_zone& zone, double easting, double northing, double& lat_deg,
                       double& lon_deg) {
    const tm_series& s = series();
    const double xi = (northing - zone.false_northing()) / s.rectifying_radius;
    const double eta = (easting - false_easting) / s.rectifying_radius;

    double xi_p = xi;
    double eta_p = eta;
    for (int j = 1; j <= 6; ++j) {
        xi_p -= s.beta[j - 1] * std::sin(2.0 * j * xi) * std::cosh(2.0 * j * eta);
        eta_p -= s.beta[j - 1] * std::cos(2.0 * j * xi) * std::sinh(2.0 * j * eta);
    }

    const double sinh_eta = std::sinh(eta_p);
    const double taup = std::sin(xi_p) / std::hypot(sinh_eta, std::cos(xi_p));
    const double tau = inverse_conformal_tan(taup, eccentricity);

    lat_deg = std::atan(tau) * 180.0 / pi;
    lon_deg = zone.central_meridian_deg() + std::atan2(sinh_eta, std::cos(xi_p)) * 180.0 / pi;
}

}  // namespace s2nbar
