#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "amplitudes.hpp"
#include "linalg3c.hpp"
#include "material.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"

namespace polariton
{
//---------------------------------------------------------------------------//
// SAMPLES
//---------------------------------------------------------------------------//
enum SampleFlag : std::uint32_t
{
    kFlagNone = 0,
    kFlagDDivergenceAdjacent = 1u << 0,  // on the support of the d term
    kFlagKzNodeSkipped = 1u << 1,  // |k_z| below guard, rho set to 0
    kFlagThetaZero = 1u << 2,  // outside the energy-conservation region
};

//! Flag names joined with '|', or "none".
inline std::string flag_string(std::uint32_t flags)
{
    std::string s;
    auto add = [&](std::uint32_t bit, char const* name) {
        if (flags & bit)
        {
            if (!s.empty())
                s += '|';
            s += name;
        }
    };
    add(kFlagDDivergenceAdjacent, "d_divergence_adjacent");
    add(kFlagKzNodeSkipped, "kz_node_skipped");
    add(kFlagThetaZero, "theta_zero");
    return s.empty() ? "none" : s;
}

/*!
 * One evaluation of the caption-normalised spectral density.
 *
 * rho is rho c^2/(z0 nu)^2 (motion), rho/alpha0^2 (oscillating eps) or
 * rho/f0^2 (moving bump, units of (c/omega0)^6).
 */
struct SpectralSample
{
    Vec3 k1{};
    std::optional<Vec3> k2;
    double omega = 0.0;
    double rho = 0.0;
    std::uint32_t flags = kFlagNone;
};

//---------------------------------------------------------------------------//
// SPECTRAL DENSITIES
//---------------------------------------------------------------------------//
inline SpectralSample rho_motion(MaterialParams const& p,
                                 MotionScenario const& scen,
                                 Vec3 const& k,
                                 double omega,
                                 AmplitudeOptions const& opt = {})
{
    if (!(omega > 0.0))
        throw PreconditionError("rho_motion: omega must be positive");
    SpectralSample s;
    s.k1 = k;
    s.omega = omega;
    if (!(omega < scen.nu))
    {
        s.flags |= kFlagThetaZero;
        return s;
    }
    if (std::abs(k.z) < opt.kz_guard)
    {
        s.flags |= kFlagKzNodeSkipped;
        return s;
    }
    double const omega2 = scen.nu - omega;
    if (std::abs(omega - omega2) < opt.eta)
        s.flags |= kFlagDDivergenceAdjacent;
    s.rho = 0.5 * std::numbers::pi
            * frobenius_sq(amp_motion(p, scen, k, omega, omega2, opt));
    return s;
}

//! Constant velocity: the delta(w1 + w2) support is empty for w1, w2 > 0.
inline SpectralSample rho_uniform_motion(MaterialParams const& /*p*/,
                                         UniformMotionScenario const& /*scen*/,
                                         Vec3 const& k,
                                         double omega)
{
    if (!(omega > 0.0))
        throw PreconditionError("rho_uniform_motion: omega must be positive");
    SpectralSample s;
    s.k1 = k;
    s.omega = omega;
    s.flags = kFlagThetaZero;
    return s;
}

inline SpectralSample rho_oscillating_eps(MaterialParams const& p,
                                          OscillatingEpsScenario const& scen,
                                          Vec3 const& k,
                                          double omega)
{
    if (!(omega > 0.0))
        throw PreconditionError("rho_oscillating_eps: omega must be positive");
    SpectralSample s;
    s.k1 = k;
    s.omega = omega;
    if (!(omega < scen.nu))
    {
        s.flags |= kFlagThetaZero;
        return s;
    }
    OscillatingEpsScenario unit = scen;
    unit.alpha0 = 1.0;
    s.rho = 0.5 * std::numbers::pi
            * frobenius_sq(amp_oscillating_eps(p, unit, k, omega, scen.nu - omega));
    return s;
}

//! |f(K)|^2 / f0^2 for the Gaussian bump, exp(-sigma^2 K^2 / 2).
inline double bump_spectrum_sq(MovingBumpScenario const& scen, Vec3 const& big_k)
{
    return std::exp(-0.5 * scen.sigma * scen.sigma * dot(big_k, big_k));
}

inline SpectralSample rho_moving_bump(MaterialParams const& p,
                                      MovingBumpScenario const& scen,
                                      Vec3 const& k1,
                                      Vec3 const& k2,
                                      double omega)
{
    if (!(omega > 0.0))
        throw PreconditionError("rho_moving_bump: omega must be positive");
    SpectralSample s;
    s.k1 = k1;
    s.k2 = k2;
    s.omega = omega;
    double const omega2 = scen.v * (k1.z + k2.z) - omega;
    if (!(omega2 > 0.0))
    {
        s.flags |= kFlagThetaZero;
        return s;
    }
    s.rho = 2.0 * std::numbers::pi
            * frobenius_sq(amp_moving_bump(p, scen, k1, k2, omega, omega2))
            * bump_spectrum_sq(scen, k1 + k2);
    return s;
}

/*!
 * Dispatch on the scenario. k2 is used only by the moving bump, where it
 * is required.
 */
inline SpectralSample rho_sample(MaterialParams const& p,
                                 Scenario const& scen,
                                 Vec3 const& k1,
                                 std::optional<Vec3> const& k2,
                                 double omega,
                                 AmplitudeOptions const& opt = {})
{
    return std::visit(
        [&](auto const& sc) -> SpectralSample {
            using T = std::decay_t<decltype(sc)>;
            if constexpr (std::is_same_v<T, MotionScenario>)
                return rho_motion(p, sc, k1, omega, opt);
            else if constexpr (std::is_same_v<T, UniformMotionScenario>)
                return rho_uniform_motion(p, sc, k1, omega);
            else if constexpr (std::is_same_v<T, OscillatingEpsScenario>)
                return rho_oscillating_eps(p, sc, k1, omega);
            else
            {
                if (!k2)
                    throw PreconditionError("moving bump sample needs k2");
                return rho_moving_bump(p, sc, k1, *k2, omega);
            }
        },
        scen);
}

//! Factor restoring the un-normalised rho from the caption-normalised one.
inline double rho_scale(Scenario const& scen)
{
    return std::visit(
        [](auto const& sc) -> double {
            using T = std::decay_t<decltype(sc)>;
            if constexpr (std::is_same_v<T, MotionScenario>)
                return sc.z0 * sc.z0 * sc.nu * sc.nu
                       / (kSpeedOfLight * kSpeedOfLight);
            else if constexpr (std::is_same_v<T, UniformMotionScenario>)
                return sc.v * sc.v / (kSpeedOfLight * kSpeedOfLight);
            else if constexpr (std::is_same_v<T, OscillatingEpsScenario>)
                return sc.alpha0 * sc.alpha0;
            else
                return sc.f0 * sc.f0;
        },
        scen);
}

//---------------------------------------------------------------------------//
// GRIDS
//---------------------------------------------------------------------------//
/*!
 * Cell-centred axis: node i sits at min + (i + 1/2)(max - min)/count.
 *
 * Cell centring keeps nodes off the axis ends, in particular k = 0,
 * omega = 0 and (for even counts) omega = nu/2 when max = nu.
 */
struct Axis
{
    double min = 0.0;
    double max = 4.0;
    int count = 200;

    double width() const { return (max - min) / count; }
    double node(int i) const { return min + (i + 0.5) * width(); }

    friend bool operator==(Axis const&, Axis const&) = default;
};

struct RateGrid
{
    double k_max = 4.0;  // [omega0/c]
    int k_count = 16;
    int cos_count = 8;  // polar nodes in cos(theta)
    int phi_count = 8;  // azimuthal nodes for the second wavevector
    int omega_count = 16;
    double omega_max = 4.0;  // frequency cap where no theta bound applies
    double tolerance = 0.05;  // allowed relative change on cutoff doubling

    friend bool operator==(RateGrid const&, RateGrid const&) = default;
};

struct ScanGrid
{
    Axis omega{0.0, 4.0, 200};
    Axis ck{0.0, 4.0, 200};
    //! cos(theta) of the wavevector(s) in maps
    double inclination_cos = 1.0 / std::numbers::sqrt3;
    //! azimuth of k2 relative to k1 in moving-bump maps
    double bump_azimuth = 0.5 * std::numbers::pi;
    int polar_count = 90;
    int azimuth_count = 180;
    double angular_omega = 1.0;
    //! |k| for angular scans; 0 selects the scenario default
    double angular_ck = 0.0;
    double kz_guard = 1e-6;
    RateGrid rate;

    friend bool operator==(ScanGrid const&, ScanGrid const&) = default;
};

inline void validate(Axis const& a, char const* name)
{
    if (a.count < 2)
        throw PreconditionError(std::string("grid.") + name
                                + ".count must be >= 2");
    if (!(a.min < a.max) || !std::isfinite(a.min) || !std::isfinite(a.max))
        throw PreconditionError(std::string("grid.") + name
                                + " needs finite min < max");
    if (a.min < 0.0)
        throw PreconditionError(std::string("grid.") + name
                                + ".min must be >= 0");
}

inline void validate(ScanGrid const& g)
{
    validate(g.omega, "omega");
    validate(g.ck, "ck");
    if (!(std::abs(g.inclination_cos) <= 1.0))
        throw PreconditionError("grid.inclination_cos must lie in [-1, 1]");
    if (g.polar_count < 2 || g.azimuth_count < 2)
        throw PreconditionError("grid angular counts must be >= 2");
    if (!(g.angular_omega > 0.0))
        throw PreconditionError("grid.angular_omega must be positive");
    if (!(g.angular_ck >= 0.0))
        throw PreconditionError("grid.angular_ck must be >= 0");
    if (!(g.kz_guard >= 0.0))
        throw PreconditionError("grid.kz_guard must be >= 0");
    auto const& r = g.rate;
    if (!(r.k_max > 0.0) || !std::isfinite(r.k_max))
        throw PreconditionError("grid.rate.k_max must be finite and positive");
    if (r.k_count < 2 || r.cos_count < 2 || r.phi_count < 2
        || r.omega_count < 2)
        throw PreconditionError("grid.rate counts must be >= 2");
    if (!(r.omega_max > 0.0))
        throw PreconditionError("grid.rate.omega_max must be positive");
    if (!(r.tolerance > 0.0))
        throw PreconditionError("grid.rate.tolerance must be positive");
}

//---------------------------------------------------------------------------//
// TOTAL RATE
//---------------------------------------------------------------------------//
struct RateResult
{
    double value = 0.0;  // un-normalised rate at the declared cutoff
    double normalized = 0.0;  // same, caption normalisation
    double doubled_normalized = 0.0;  // with k_max and k_count doubled
    double cutoff_change = 0.0;  // relative change on doubling
    bool converged = true;
    std::size_t samples = 0;
    std::size_t kz_skipped = 0;
};

namespace detail
{
struct RatePass
{
    double sum = 0.0;
    std::size_t samples = 0;
    std::size_t kz_skipped = 0;
};

// Midpoint product rule; the azimuth of the first wavevector is integrated
// analytically (axial symmetry about z).
inline RatePass rate_pass(MaterialParams const& p,
                          Scenario const& scen,
                          RateGrid const& g,
                          double k_max,
                          int k_count,
                          AmplitudeOptions const& opt,
                          unsigned workers)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    Axis const kax{0.0, k_max, k_count};
    Axis const cax{-1.0, 1.0, g.cos_count};
    Axis const pax{0.0, two_pi, g.phi_count};
    bool const bump = std::holds_alternative<MovingBumpScenario>(scen);

    // frequency range with a non-empty theta support
    double omega_top = g.omega_max;
    if (auto const* m = std::get_if<MotionScenario>(&scen))
        omega_top = m->nu;
    else if (auto const* e = std::get_if<OscillatingEpsScenario>(&scen))
        omega_top = e->nu;

    std::size_t const outer = static_cast<std::size_t>(k_count) * g.cos_count;
    std::vector<RatePass> partial(outer);
    parallel_for(outer, workers, [&](std::size_t task) {
        int const ik = static_cast<int>(task / g.cos_count);
        int const ic = static_cast<int>(task % g.cos_count);
        double const k = kax.node(ik);
        double const ct = cax.node(ic);
        double const st = std::sqrt(1.0 - ct * ct);
        Vec3 const k1{k * st, 0.0, k * ct};
        double const w1 = k * k * kax.width() * cax.width();
        RatePass& out = partial[task];

        if (!bump)
        {
            Axis const wax{0.0, omega_top, g.omega_count};
            for (int iw = 0; iw < wax.count; ++iw)
            {
                auto const s = rho_sample(p, scen, k1, std::nullopt,
                                          wax.node(iw), opt);
                out.sum += w1 * wax.width() * s.rho;
                ++out.samples;
                out.kz_skipped += (s.flags & kFlagKzNodeSkipped) ? 1 : 0;
            }
            return;
        }
        auto const& b = std::get<MovingBumpScenario>(scen);
        for (int jk = 0; jk < kax.count; ++jk)
        {
            for (int jc = 0; jc < cax.count; ++jc)
            {
                for (int jp = 0; jp < pax.count; ++jp)
                {
                    double const kk = kax.node(jk);
                    Vec3 const k2 = spherical(kk, std::acos(cax.node(jc)),
                                              pax.node(jp));
                    double const top = b.v * (k1.z + k2.z);
                    if (!(top > 0.0))
                        continue;
                    double const w2 = kk * kk * kax.width() * cax.width()
                                      * pax.width();
                    Axis const wax{0.0, top, g.omega_count};
                    for (int iw = 0; iw < wax.count; ++iw)
                    {
                        auto const s = rho_moving_bump(p, b, k1, k2,
                                                       wax.node(iw));
                        out.sum += w1 * w2 * wax.width() * s.rho;
                        ++out.samples;
                    }
                }
            }
        }
    });

    RatePass total;
    for (auto const& r : partial)
    {
        total.sum += r.sum;
        total.samples += r.samples;
        total.kz_skipped += r.kz_skipped;
    }
    double const per_k = two_pi / std::pow(two_pi, 3);
    total.sum *= bump ? per_k / std::pow(two_pi, 3) : per_k;
    return total;
}
}  // namespace detail

/*!
 * Total emission rate: Gamma/V for motion and oscillating eps, the
 * (omega, k1, k2) integral for the moving bump.
 *
 * The integral is repeated with k_max and k_count doubled; a relative
 * change above the grid tolerance is reported as non-convergence.
 */
inline RateResult total_rate(MaterialParams const& p,
                             Scenario const& scen,
                             ScanGrid const& grid,
                             AmplitudeOptions opt = {},
                             unsigned workers = 1)
{
    validate(grid);
    opt.kz_guard = grid.kz_guard;
    auto const& g = grid.rate;
    auto const base = detail::rate_pass(p, scen, g, g.k_max, g.k_count, opt,
                                        workers);
    auto const doubled = detail::rate_pass(p, scen, g, 2.0 * g.k_max,
                                           2 * g.k_count, opt, workers);
    RateResult r;
    r.normalized = base.sum;
    r.doubled_normalized = doubled.sum;
    r.value = base.sum * rho_scale(scen);
    r.samples = base.samples + doubled.samples;
    r.kz_skipped = base.kz_skipped + doubled.kz_skipped;
    double const ref = std::max(std::abs(base.sum), std::abs(doubled.sum));
    r.cutoff_change = ref > 0.0 ? std::abs(doubled.sum - base.sum) / ref : 0.0;
    r.converged = r.cutoff_change <= g.tolerance;
    return r;
}

//---------------------------------------------------------------------------//
// FINITE-TIME WEIGHT
//---------------------------------------------------------------------------//
//! v(t) = z0 nu cos(nu t)
struct CosineVelocity
{
    double z0 = 0.1;
    double nu = 3.0;
};

/*!
 * W(Omega, T) = |int_{-T/2}^{T/2} v(t) exp(i Omega t) dt|^2 / T.
 */
inline double finite_time_weight(CosineVelocity const& v, double big_omega,
                                 double big_t)
{
    if (!(big_t > 0.0))
        throw PreconditionError("finite_time_weight: T must be positive");
    // sin(x T/2)/x, with its x -> 0 limit
    auto s = [&](double x) {
        double const h = 0.5 * x * big_t;
        if (std::abs(h) < 1e-8)
            return 0.5 * big_t * (1.0 - h * h / 6.0);
        return std::sin(h) / x;
    };
    double const amp = v.z0 * v.nu * (s(big_omega + v.nu) + s(big_omega - v.nu));
    return amp * amp / big_t;
}

struct DeltaCheck
{
    double smoothed = 0.0;  // int W g dOmega / (pi z0^2 nu^2 / 2)
    double target = 0.0;  // g(nu) + g(-nu)
    double error = 0.0;  // |smoothed - target|
    bool converged = true;
};

/*!
 * Integrate W(Omega, T) against a Gaussian test function of the given
 * centre and width and compare with the delta-function limit.
 */
inline DeltaCheck delta_identity_check(CosineVelocity const& v,
                                       double big_t,
                                       double centre,
                                       double width)
{
    if (!(width > 0.0))
        throw PreconditionError("delta_identity_check: width must be positive");
    auto g = [&](double x) {
        double const u = (x - centre) / width;
        return std::exp(-0.5 * u * u);
    };
    double const lo = centre - 12.0 * width;
    double const hi = centre + 12.0 * width;
    // two oscillation periods of W per initial panel
    double const step = 4.0 * std::numbers::pi / big_t;
    std::vector<double> breaks;
    for (double x = lo; x < hi; x += step)
        breaks.push_back(x);
    breaks.push_back(hi);
    for (double pole : {v.nu, -v.nu})
    {
        if (pole > lo && pole < hi)
            breaks.push_back(pole);
    }
    QuadratureSettings qs{1e-11, 0.0, 8 * breaks.size() + 4000};
    auto q = integrate_pieces(
        [&](double x) { return finite_time_weight(v, x, big_t) * g(x); },
        breaks, qs);

    DeltaCheck r;
    double const norm = 0.5 * std::numbers::pi * v.z0 * v.z0 * v.nu * v.nu;
    r.smoothed = q.value / norm;
    r.target = g(v.nu) + g(-v.nu);
    r.error = std::abs(r.smoothed - r.target);
    r.converged = q.converged;
    return r;
}

}  // namespace polariton
