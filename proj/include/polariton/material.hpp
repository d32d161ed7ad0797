#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "linalg3c.hpp"
#include "quadrature.hpp"

namespace polariton
{
// Natural units: omega0 = c = eps0 = mu0 = hbar = 1.
inline constexpr double kSpeedOfLight = 1.0;
inline constexpr double kVacuumPermittivity = 1.0;

class PreconditionError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

//---------------------------------------------------------------------------//
/*!
 * Single-resonance Lorentz oscillator dielectric.
 *
 * Frequencies are in units of omega0. The defaults are the reference
 * material used throughout: omega_p = 0.5, gamma = 0.1.
 */
struct MaterialParams
{
    double omega0 = 1.0;
    double omega_p = 0.5;
    double gamma = 0.1;

    friend bool operator==(MaterialParams const&, MaterialParams const&)
        = default;
};

inline void validate(MaterialParams const& p)
{
    if (!(p.omega0 > 0.0) || !std::isfinite(p.omega0))
        throw PreconditionError("material.omega0 must be positive");
    if (!(p.omega_p >= 0.0) || !std::isfinite(p.omega_p))
        throw PreconditionError("material.omega_p must be non-negative");
    if (!(p.gamma > 0.0) || !std::isfinite(p.gamma))
        throw PreconditionError("material.gamma must be positive");
}

// eps(w) = 1 + wp^2 / (w0^2 - w^2 - i gamma w)
inline cplx permittivity(MaterialParams const& p, double omega)
{
    cplx const denom{p.omega0 * p.omega0 - omega * omega, -p.gamma * omega};
    return 1.0 + p.omega_p * p.omega_p / denom;
}

inline cplx susceptibility(MaterialParams const& p, double omega)
{
    cplx const denom{p.omega0 * p.omega0 - omega * omega, -p.gamma * omega};
    return p.omega_p * p.omega_p / denom;
}

//! Squared field-bath coupling, alpha_b^2 = 2 w eps0 Im eps(w) / pi.
inline double coupling_sq(MaterialParams const& p, double omega)
{
    if (omega < 0.0)
        throw PreconditionError("coupling_sq: omega must be >= 0");
    return 2.0 * omega * kVacuumPermittivity
           * std::imag(permittivity(p, omega)) / std::numbers::pi;
}

inline double coupling(MaterialParams const& p, double omega)
{
    return std::sqrt(coupling_sq(p, omega));
}

//---------------------------------------------------------------------------//
struct KramersKronigResult
{
    double residual = 0.0;  // |Re chi - (2/pi) PV integral|
    double relative = 0.0;  // residual / |chi(omega)|
    double dispersive = 0.0;  // the PV reconstruction of Re chi
    double error = 0.0;  // quadrature error estimate
    bool converged = true;
};

/*!
 * Kramers-Kronig closure of the real part of chi at omega.
 *
 * The principal value is handled by subtracting the pole residue on the
 * symmetric window [0, 2 omega], which integrates to zero, and splitting
 * the window at omega so that no node sits on the pole.
 */
inline KramersKronigResult kk_residual(MaterialParams const& p,
                                       double omega,
                                       QuadratureSettings const& qs = {})
{
    if (!(omega > 0.0))
        throw PreconditionError("kk_residual: omega must be positive");

    auto h = [&](double x) {
        return x * std::imag(susceptibility(p, x)) / (x + omega);
    };
    double const h0 = h(omega);
    double const window = 2.0 * omega;
    auto integrand = [&](double x) {
        if (x == omega)
            return 0.0;
        if (x < window)
            return (h(x) - h0) / (x - omega);
        return h(x) / (x - omega);
    };

    double const inf = std::numeric_limits<double>::infinity();
    std::vector<double> breaks{0.0, omega, window, inf};
    // resolve the absorption line
    for (double off : {-10.0, -1.0, 0.0, 1.0, 10.0})
    {
        double const b = p.omega0 + off * p.gamma;
        if (b > 0.0)
            breaks.push_back(b);
    }
    // Re chi vanishes at resonance, so the tolerance is anchored to |chi|
    QuadratureSettings local = qs;
    local.abs_tol = std::max(
        qs.abs_tol, qs.rel_tol * std::abs(susceptibility(p, omega)));
    auto q = integrate_pieces(integrand, breaks, local);

    KramersKronigResult r;
    r.dispersive = 2.0 / std::numbers::pi * q.value;
    r.residual = std::abs(std::real(susceptibility(p, omega)) - r.dispersive);
    r.relative = r.residual / std::abs(susceptibility(p, omega));
    r.error = 2.0 / std::numbers::pi * q.error;
    r.converged = q.converged;
    return r;
}

}  // namespace polariton
