#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include "material.hpp"
#include "quadrature.hpp"

namespace polariton
{
//---------------------------------------------------------------------------//
/*!
 * Controls for the regularised oscillator-bath frequency integral.
 *
 * eta is the finite stand-in for the 0+ shift of the pole below the real
 * axis. It is an absolute frequency (not scaled by omega).
 */
struct BathIntegralSettings
{
    double eta = 1e-6;
    double omega_max = 50.0;
    double rel_tol = 1e-8;
    bool extrapolate = true;

    friend bool operator==(BathIntegralSettings const&,
                           BathIntegralSettings const&)
        = default;
};

inline void validate(BathIntegralSettings const& s)
{
    if (!(s.eta > 0.0))
        throw PreconditionError("bath.eta must be positive");
    if (!(s.omega_max > 5.0))
        throw PreconditionError("bath.omega_max must exceed 5 omega0");
    if (!(s.rel_tol > 0.0 && s.rel_tol < 1.0))
        throw PreconditionError("bath.rel_tol must lie in (0, 1)");
}

//! Spectral profile beta(w) of a permittivity modulation, w >= 0.
using SpectralFunction = std::function<double(double)>;

//! beta = scale * alpha_b: the modulation shares the background dispersion.
inline SpectralFunction background_beta(MaterialParams const& p,
                                        double scale = 1.0)
{
    return [p, scale](double w) { return scale * coupling(p, w); };
}

struct BathIntegralResult
{
    cplx value{};
    double error = 0.0;  // quadrature (plus extrapolation) error estimate
    double tail = 0.0;  // |contribution beyond omega_max|
    bool converged = true;
};

namespace detail
{
inline BathIntegralResult bath_integral_at(MaterialParams const& p,
                                           SpectralFunction const& beta,
                                           double omega2,
                                           double eta,
                                           BathIntegralSettings const& s)
{
    cplx const z{omega2, -eta};
    cplx const z2 = z * z;
    auto f = [&](double w) { return coupling(p, w) * beta(w); };
    double const f2 = f(omega2);

    // Pole subtraction: the constant f(omega2) is integrated in closed form
    //   int_0^W dw / (w^2 - z^2) = [log(w - z) - log(w + z)] / (2 z),
    // where w - z stays in the upper and w + z in the lower half plane.
    double const wmax = std::max(s.omega_max, 2.0 * omega2);
    auto logdiff = [&](double w) { return std::log(w - z) - std::log(w + z); };
    cplx const analytic = f2 * (logdiff(wmax) - logdiff(0.0)) / (2.0 * z);

    auto smooth = [&](double w) -> cplx { return (f(w) - f2) / (w * w - z2); };
    QuadratureSettings qs{s.rel_tol * 0.1};
    std::vector<double> breaks{0.0, omega2, wmax};
    for (double off : {-10.0, 0.0, 10.0})
    {
        double const b = p.omega0 + off * p.gamma;
        if (b > 0.0 && b < wmax)
            breaks.push_back(b);
    }
    for (double off : {-100.0, -1.0, 1.0, 100.0})
    {
        double const b = omega2 + off * eta;
        if (b > 0.0 && b < wmax)
            breaks.push_back(b);
    }
    auto body = integrate_pieces(smooth, breaks, qs);

    auto tail_f = [&](double w) -> cplx { return f(w) / (w * w - z2); };
    auto tail = integrate_pieces(
        tail_f, {wmax, std::numeric_limits<double>::infinity()}, qs);

    BathIntegralResult r;
    r.value = body.value + analytic + tail.value;
    r.error = body.error + tail.error;
    r.tail = std::abs(tail.value);
    r.converged = body.converged && tail.converged;
    return r;
}
}  // namespace detail

/*!
 * I_beta(w2) = int_0^inf dw alpha_b(w) beta(w) / (w^2 - (w2 - i eta)^2).
 *
 * With extrapolation the integral is evaluated at eta, eta/2, eta/4 and
 * combined by second-order Richardson extrapolation to eta -> 0.
 */
inline BathIntegralResult bath_integral_numeric(MaterialParams const& p,
                                                SpectralFunction const& beta,
                                                double omega2,
                                                BathIntegralSettings const& s = {})
{
    if (!(omega2 > 0.0))
        throw PreconditionError("bath_integral: omega2 must be positive");
    validate(s);

    auto r1 = detail::bath_integral_at(p, beta, omega2, s.eta, s);
    if (!s.extrapolate)
        return r1;
    auto r2 = detail::bath_integral_at(p, beta, omega2, s.eta / 2, s);
    auto r4 = detail::bath_integral_at(p, beta, omega2, s.eta / 4, s);

    BathIntegralResult r;
    r.value = (8.0 * r4.value - 6.0 * r2.value + r1.value) / 3.0;
    // the first-order estimate differs from the second-order one by the
    // neglected extrapolation term
    cplx const linear = 2.0 * r4.value - r2.value;
    r.error = r1.error + r2.error + r4.error + std::abs(r.value - linear);
    r.tail = r4.tail;
    r.converged = r1.converged && r2.converged && r4.converged
                  && r.error <= s.rel_tol * std::abs(r.value) + 1e-14;
    return r;
}

//! Closed form for beta = alpha_b: eps0 conj(chi(w2)).
inline cplx bath_integral_analytic(MaterialParams const& p, double omega2)
{
    if (!(omega2 > 0.0))
        throw PreconditionError("bath_integral: omega2 must be positive");
    return kVacuumPermittivity * std::conj(susceptibility(p, omega2));
}

}  // namespace polariton
