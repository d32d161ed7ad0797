#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "bath.hpp"
#include "greens.hpp"
#include "linalg3c.hpp"
#include "material.hpp"

namespace polariton
{
//---------------------------------------------------------------------------//
// SCENARIOS
//---------------------------------------------------------------------------//
//! Whole medium oscillating along z, v(t) = z0 nu cos(nu t).
struct MotionScenario
{
    double z0 = 0.1;  // maximum displacement [c/omega0]
    double nu = 3.0;  // oscillation frequency [omega0]

    friend bool operator==(MotionScenario const&, MotionScenario const&)
        = default;
};

//! Whole medium translating along z at constant speed v.
struct UniformMotionScenario
{
    double v = 0.1;  // [c]

    friend bool operator==(UniformMotionScenario const&,
                           UniformMotionScenario const&)
        = default;
};

enum class BetaMode
{
    background,  // beta = alpha_b
    scaled,  // beta = beta_scale * alpha_b
};

//! Permittivity modulated in time, delta alpha = alpha0 beta(w) cos(nu t).
struct OscillatingEpsScenario
{
    double alpha0 = 1.0;
    double nu = 3.0;
    BetaMode beta_mode = BetaMode::background;
    double beta_scale = 1.0;

    double beta_factor() const
    {
        return beta_mode == BetaMode::scaled ? beta_scale : 1.0;
    }

    friend bool operator==(OscillatingEpsScenario const&,
                           OscillatingEpsScenario const&)
        = default;
};

//! Gaussian index bump travelling along z at speed v.
struct MovingBumpScenario
{
    double v = 0.5;  // [c]; not limited to slow speeds
    double sigma = 0.1;  // Gaussian width [c/omega0]
    double f0 = 1.0;  // pulse area

    friend bool operator==(MovingBumpScenario const&, MovingBumpScenario const&)
        = default;
};

using Scenario = std::variant<MotionScenario,
                              UniformMotionScenario,
                              OscillatingEpsScenario,
                              MovingBumpScenario>;

inline char const* scenario_name(Scenario const& s)
{
    constexpr char const* names[]
        = {"motion", "uniform_motion", "oscillating_eps", "moving_bump"};
    return names[s.index()];
}

/*!
 * Check scenario invariants.
 *
 * Throws on violations; returns advisory warnings (e.g. a displacement
 * velocity that is not small compared with c).
 */
inline std::vector<std::string> validate(Scenario const& s)
{
    std::vector<std::string> warnings;
    std::visit(
        [&](auto const& sc) {
            using T = std::decay_t<decltype(sc)>;
            if constexpr (std::is_same_v<T, MotionScenario>)
            {
                if (!(sc.z0 >= 0.0))
                    throw PreconditionError("scenario.z0 must be >= 0");
                if (!(sc.nu > 0.0))
                    throw PreconditionError("scenario.nu must be positive");
                if (sc.z0 * sc.nu > 0.1 * kSpeedOfLight)
                    warnings.emplace_back(
                        "peak velocity z0*nu is not small compared with c");
            }
            else if constexpr (std::is_same_v<T, UniformMotionScenario>)
            {
                if (!(std::abs(sc.v) < kSpeedOfLight))
                    throw PreconditionError("scenario.v must satisfy |v| < c");
                if (std::abs(sc.v) > 0.1 * kSpeedOfLight)
                    warnings.emplace_back(
                        "velocity is not small compared with c");
            }
            else if constexpr (std::is_same_v<T, OscillatingEpsScenario>)
            {
                if (!(sc.nu > 0.0))
                    throw PreconditionError("scenario.nu must be positive");
                if (!std::isfinite(sc.alpha0) || !std::isfinite(sc.beta_scale))
                    throw PreconditionError("scenario amplitudes must be finite");
            }
            else
            {
                if (!(sc.v > 0.0))
                    throw PreconditionError("scenario.v must be positive");
                if (!(sc.sigma > 0.0))
                    throw PreconditionError("scenario.sigma must be positive");
            }
        },
        s);
    return warnings;
}

//---------------------------------------------------------------------------//
struct AmplitudeOptions
{
    double eta = 1e-6;  // pole regulariser for the motion coefficients
    double kz_guard = 1e-6;  // |k_z| below this is a node of the e-term
};

class KzNodeError : public std::domain_error
{
  public:
    KzNodeError() : std::domain_error("k_z node: |k_z| below guard threshold")
    {
    }
};

//---------------------------------------------------------------------------//
// OSCILLATING MOTION
//---------------------------------------------------------------------------//
/*!
 * Coefficients of the moving-medium amplitude.
 *
 * The delta(w1 - w2) coefficient d is never evaluated; d_divergent marks
 * samples that sit on its support (|w1 - w2| < eta).
 */
struct MotionCoefficients
{
    cplx a{};
    cplx b{};
    cplx c{};
    cplx e{};
    bool d_divergent = false;
};

inline MotionCoefficients
coeff_abcde(MaterialParams const& p, double omega1, double omega2, double eta)
{
    if (!(omega1 > 0.0 && omega2 > 0.0))
        throw PreconditionError("coeff_abcde: frequencies must be positive");
    constexpr double pi = std::numbers::pi;
    double const c2 = kSpeedOfLight * kSpeedOfLight;

    cplx const z1{omega1, -eta};
    cplx const z2{omega2, -eta};
    cplx const den12 = omega1 * omega1 - z2 * z2;  // w1^2 - (w2 - i0)^2
    cplx const den21 = omega2 * omega2 - z1 * z1;  // w2^2 - (w1 - i0)^2

    MotionCoefficients r;
    r.a = omega1 * omega1 * omega1 * omega2 * omega2 / (pi * c2 * c2)
          * (std::conj(permittivity(p, omega1)) / den12
             + std::conj(permittivity(p, omega2)) / den21);
    r.b = omega1 / (pi * c2) * omega2 * omega2 / den12;
    r.c = omega1 / (pi * c2) * omega1 * omega1 / den21;
    r.e = cplx{0.0, omega1 / (pi * c2)};
    r.d_divergent = std::abs(omega1 - omega2) < eta;
    return r;
}

namespace detail
{
// One ordering of the moving-medium amplitude, before symmetrisation.
inline CDyad3 motion_half(MaterialParams const& p,
                          Vec3 const& k,
                          double omega1,
                          double omega2,
                          AmplitudeOptions const& opt)
{
    auto const co = coeff_abcde(p, omega1, omega2, opt.eta);
    CDyad3 const g1d = dagger(green_k(p, k, omega1));
    CDyad3 const g2c = conjugate(green_k(p, -k, omega2));
    double const eps_i = std::sqrt(std::imag(permittivity(p, omega1))
                                   * std::imag(permittivity(p, omega2)));

    CDyad3 b = (k.z * eps_i * co.a) * (g1d * g2c);
    b += co.b * g2c;
    b += co.c * g1d;

    double const w2c = omega2 * omega2 / (kSpeedOfLight * kSpeedOfLight);
    CDyad3 const inner
        = susceptibility(p, omega2) * w2c * g2c + CDyad3::identity();
    CDyad3 const zx = skew(CVec3(Vec3{0.0, 0.0, 1.0}));
    b += (co.e / k.z) * (cross_right(g1d, CVec3(k)) * zx * inner);
    return b;
}

/*
 * Dynamical-Casimir block shared by the oscillating-permittivity and
 * moving-bump amplitudes (beta = alpha_b):
 *   -(i / 2 pi) sqrt(Im chi1 Im chi2) (w1/c)^2 G^dag(k1, w1)
 *       [chi*(w2) (w2/c)^2 G*(k2, w2) + 1]
 */
inline CDyad3 casimir_block(MaterialParams const& p,
                            Vec3 const& k1,
                            Vec3 const& k2,
                            double omega1,
                            double omega2)
{
    double const c2 = kSpeedOfLight * kSpeedOfLight;
    double const loss = std::sqrt(std::imag(susceptibility(p, omega1))
                                  * std::imag(susceptibility(p, omega2)));
    cplx const pref = cplx{0.0, -1.0} / (2.0 * std::numbers::pi) * loss
                      * (omega1 * omega1 / c2);
    CDyad3 const g1d = dagger(green_k(p, k1, omega1));
    CDyad3 const g2c = conjugate(green_k(p, k2, omega2));
    CDyad3 const inner = std::conj(susceptibility(p, omega2))
                             * (omega2 * omega2 / c2) * g2c
                         + CDyad3::identity();
    return pref * (g1d * inner);
}
}  // namespace detail

/*!
 * Pair amplitude for the oscillating medium.
 *
 * A(k, w1, w2) = [B(k, w1, w2) + B^T(-k, w2, w1)] / 2, where B collects
 * the a, b, c and e terms. The d term is excluded. The result is the
 * dimensionless amplitude entering rho c^2 / (z0 nu)^2, so z0 and nu do
 * not appear.
 */
inline CDyad3 amp_motion(MaterialParams const& p,
                         MotionScenario const& /*scen*/,
                         Vec3 const& k,
                         double omega1,
                         double omega2,
                         AmplitudeOptions const& opt = {})
{
    if (std::abs(k.z) < opt.kz_guard)
        throw KzNodeError();
    CDyad3 r = detail::motion_half(p, k, omega1, omega2, opt);
    r += transpose(detail::motion_half(p, -k, omega2, omega1, opt));
    return 0.5 * r;
}

//---------------------------------------------------------------------------//
// OSCILLATING PERMITTIVITY
//---------------------------------------------------------------------------//
//! Closed form valid when beta is (a multiple of) alpha_b.
inline CDyad3 amp_oscillating_eps(MaterialParams const& p,
                                  OscillatingEpsScenario const& scen,
                                  Vec3 const& k,
                                  double omega1,
                                  double omega2)
{
    if (!(omega1 > 0.0 && omega2 > 0.0))
        throw PreconditionError("amp_oscillating_eps: frequencies must be "
                                "positive");
    CDyad3 r = detail::casimir_block(p, k, -k, omega1, omega2);
    r += transpose(detail::casimir_block(p, -k, k, omega2, omega1));
    return (scen.alpha0 * scen.beta_factor()) * r;
}

/*!
 * General-beta amplitude using the numerical bath integral I_beta(w).
 *
 * scen.beta_mode is ignored; beta is supplied directly.
 */
inline CDyad3 amp_oscillating_eps(MaterialParams const& p,
                                  OscillatingEpsScenario const& scen,
                                  SpectralFunction const& beta,
                                  Vec3 const& k,
                                  double omega1,
                                  double omega2,
                                  BathIntegralSettings const& bath = {})
{
    if (!(omega1 > 0.0 && omega2 > 0.0))
        throw PreconditionError("amp_oscillating_eps: frequencies must be "
                                "positive");
    double const c2 = kSpeedOfLight * kSpeedOfLight;
    auto half = [&](Vec3 const& kk, double w1, double w2) {
        cplx const bath_w2 = bath_integral_numeric(p, beta, w2, bath).value;
        cplx const pref = cplx{0.0, -1.0} * scen.alpha0 * (w1 * w1 / c2)
                          * coupling(p, w1) / (4.0 * std::sqrt(w1 * w2));
        CDyad3 const g1d = dagger(green_k(p, kk, w1));
        CDyad3 const g2c = conjugate(green_k(p, -kk, w2));
        CDyad3 body = (coupling(p, w2) * (w2 * w2 / c2) * bath_w2)
                      * (g1d * g2c);
        body += beta(w2) * g1d;
        return pref * body;
    };
    CDyad3 r = half(k, omega1, omega2);
    r += transpose(half(-k, omega2, omega1));
    return r;
}

//---------------------------------------------------------------------------//
// TRAVELLING PERTURBATION
//---------------------------------------------------------------------------//
/*!
 * Pair amplitude for a travelling bump with beta = alpha_b.
 *
 * The pulse spectrum f(k1 + k2) is not included; it multiplies rho.
 */
inline CDyad3 amp_moving_bump(MaterialParams const& p,
                              MovingBumpScenario const& /*scen*/,
                              Vec3 const& k1,
                              Vec3 const& k2,
                              double omega1,
                              double omega2)
{
    if (!(omega1 > 0.0 && omega2 > 0.0))
        throw PreconditionError("amp_moving_bump: frequencies must be "
                                "positive");
    CDyad3 r = detail::casimir_block(p, k1, k2, omega1, omega2);
    r += transpose(detail::casimir_block(p, k2, k1, omega2, omega1));
    return r;
}

}  // namespace polariton
