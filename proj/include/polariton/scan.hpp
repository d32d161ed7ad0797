#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

#include "amplitudes.hpp"
#include "parallel.hpp"
#include "spectra.hpp"

namespace polariton
{
//---------------------------------------------------------------------------//
struct MapSample
{
    double omega = 0.0;
    double ck = 0.0;
    SpectralSample sample;
};

struct AngularSample
{
    double theta = 0.0;  // polar angle of the scanned wavevector
    double phi = 0.0;
    SpectralSample sample;
};

//! Default |k| of angular scans: 2 omega0/c, or sqrt(3) omega0/c for the bump.
inline double default_angular_ck(Scenario const& scen)
{
    return std::holds_alternative<MovingBumpScenario>(scen)
               ? std::numbers::sqrt3
               : 2.0;
}

/*!
 * rho over the (omega, c|k|) grid, omega-major.
 *
 * Wavevectors point at the grid inclination (azimuth 0). For the moving
 * bump |k1| = |k2| and k2 is rotated by grid.bump_azimuth about z.
 */
inline std::vector<MapSample> map_samples(MaterialParams const& p,
                                          Scenario const& scen,
                                          ScanGrid const& grid,
                                          AmplitudeOptions opt = {},
                                          unsigned workers = 1)
{
    validate(grid);
    opt.kz_guard = grid.kz_guard;
    double const theta = std::acos(grid.inclination_cos);
    bool const bump = std::holds_alternative<MovingBumpScenario>(scen);

    auto const nw = static_cast<std::size_t>(grid.omega.count);
    auto const nk = static_cast<std::size_t>(grid.ck.count);
    std::vector<MapSample> out(nw * nk);
    parallel_for(out.size(), workers, [&](std::size_t i) {
        int const iw = static_cast<int>(i / nk);
        int const ik = static_cast<int>(i % nk);
        double const w = grid.omega.node(iw);
        double const k = grid.ck.node(ik) / kSpeedOfLight;
        Vec3 const k1 = spherical(k, theta, 0.0);
        std::optional<Vec3> k2;
        if (bump)
            k2 = spherical(k, theta, grid.bump_azimuth);
        out[i] = {w, grid.ck.node(ik), rho_sample(p, scen, k1, k2, w, opt)};
    });
    return out;
}

/*!
 * rho over directions at fixed (omega, |k|), polar-major.
 *
 * For the moving bump k1 is held at the grid inclination and the
 * direction of k2 is scanned.
 */
inline std::vector<AngularSample> angular_samples(MaterialParams const& p,
                                                  Scenario const& scen,
                                                  ScanGrid const& grid,
                                                  AmplitudeOptions opt = {},
                                                  unsigned workers = 1)
{
    validate(grid);
    opt.kz_guard = grid.kz_guard;
    double const ck = grid.angular_ck > 0.0 ? grid.angular_ck
                                            : default_angular_ck(scen);
    double const k = ck / kSpeedOfLight;
    bool const bump = std::holds_alternative<MovingBumpScenario>(scen);
    Axis const polar{0.0, std::numbers::pi, grid.polar_count};
    Axis const azimuth{0.0, 2.0 * std::numbers::pi, grid.azimuth_count};
    Vec3 const k_fixed = spherical(k, std::acos(grid.inclination_cos), 0.0);

    auto const nt = static_cast<std::size_t>(polar.count);
    auto const np = static_cast<std::size_t>(azimuth.count);
    std::vector<AngularSample> out(nt * np);
    parallel_for(out.size(), workers, [&](std::size_t i) {
        double const th = polar.node(static_cast<int>(i / np));
        double const ph = azimuth.node(static_cast<int>(i % np));
        Vec3 const dir = spherical(k, th, ph);
        SpectralSample s
            = bump ? rho_sample(p, scen, k_fixed, dir, grid.angular_omega, opt)
                   : rho_sample(p, scen, dir, std::nullopt, grid.angular_omega,
                                opt);
        out[i] = {th, ph, s};
    });
    return out;
}

}  // namespace polariton
