#pragma once

#include "linalg3c.hpp"
#include "material.hpp"

namespace polariton
{
/*!
 * Retarded dyadic Green function of the infinite homogeneous medium in
 * wavevector space:
 *
 *   G(k, w) = [k k - q^2 1] / [q^2 (q^2 - k^2)],   q^2 = eps(w) w^2 / c^2.
 *
 * Transverse eigenvalue 1/(k^2 - q^2), longitudinal -1/q^2. The
 * 2 pi mu0 delta(W - W2) factor of the time-domain problem is not
 * included.
 */
inline CDyad3 green_k(MaterialParams const& p, Vec3 const& k, double omega)
{
    if (omega == 0.0)
        throw PreconditionError("green_k: omega must be nonzero");
    double const w_c = omega / kSpeedOfLight;
    cplx const q2 = permittivity(p, omega) * w_c * w_c;
    double const k2 = dot(k, k);
    cplx const inv = 1.0 / (q2 * (q2 - k2));

    CDyad3 g = outer(CVec3(k), CVec3(k));
    for (std::size_t i = 0; i < 3; ++i)
        g(i, i) -= q2;
    return g * inv;
}

//! M = k k - (k^2 - eps w^2/c^2) 1, the operator G inverts (M G = -1).
inline CDyad3 helmholtz_operator(MaterialParams const& p,
                                 Vec3 const& k,
                                 double omega)
{
    double const w_c = omega / kSpeedOfLight;
    cplx const q2 = permittivity(p, omega) * w_c * w_c;
    CDyad3 m = outer(CVec3(k), CVec3(k));
    cplx const shift = dot(k, k) - q2;
    for (std::size_t i = 0; i < 3; ++i)
        m(i, i) -= shift;
    return m;
}

//! Frobenius norm of M G + 1.
inline double helmholtz_residual(MaterialParams const& p,
                                 Vec3 const& k,
                                 double omega,
                                 CDyad3 const& g)
{
    return frobenius(matmul(helmholtz_operator(p, k, omega), g)
                     + CDyad3::identity());
}

//! Residual scaled by |M| |G|, the size of the terms that cancel.
inline double helmholtz_relative_residual(MaterialParams const& p,
                                          Vec3 const& k,
                                          double omega,
                                          CDyad3 const& g)
{
    double const scale
        = frobenius(helmholtz_operator(p, k, omega)) * frobenius(g);
    return helmholtz_residual(p, k, omega, g) / scale;
}

}  // namespace polariton
