#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <vector>

#include "linalg3c.hpp"
#include "material.hpp"

namespace polariton
{
//---------------------------------------------------------------------------//
/*!
 * J_0(x) ... J_nmax(x) by Miller's backward recurrence.
 *
 * The recurrence J_{k-1} = (2k/x) J_k - J_{k+1} is started well above
 * max(nmax, |x|) and normalised with J_0 + 2 sum_k J_2k = 1. Negative x
 * uses J_n(-x) = (-1)^n J_n(x).
 */
inline std::vector<double> bessel_jn_sequence(int nmax, double x)
{
    if (nmax < 0)
        throw PreconditionError("bessel_jn_sequence: nmax must be >= 0");
    std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
    if (x == 0.0)
    {
        out[0] = 1.0;
        return out;
    }
    double const ax = std::abs(x);

    int const top = std::max(nmax, static_cast<int>(ax));
    int start = top + 20 + static_cast<int>(std::sqrt(40.0 * (top + 1)));
    start += start % 2;  // even start keeps the normalisation sum aligned

    std::vector<double> j(static_cast<std::size_t>(start) + 2, 0.0);
    j[static_cast<std::size_t>(start)] = 1e-300;
    double norm = 0.0;
    for (int k = start; k >= 1; --k)
    {
        auto const uk = static_cast<std::size_t>(k);
        j[uk - 1] = 2.0 * k / ax * j[uk] - j[uk + 1];
        if (std::abs(j[uk - 1]) > 1e250)
        {
            for (auto& v : j)
                v *= 1e-250;
        }
    }
    norm = j[0];
    for (int k = 2; k <= start; k += 2)
        norm += 2.0 * j[static_cast<std::size_t>(k)];

    for (int n = 0; n <= nmax; ++n)
    {
        double v = j[static_cast<std::size_t>(n)] / norm;
        if (x < 0.0 && (n % 2))
            v = -v;
        out[static_cast<std::size_t>(n)] = v;
    }
    return out;
}

//! J_n(x) for any integer n, via J_{-n} = (-1)^n J_n.
inline double bessel_jn(int n, double x)
{
    int const an = std::abs(n);
    double const v = bessel_jn_sequence(an, x)[static_cast<std::size_t>(an)];
    return (n < 0 && (an % 2)) ? -v : v;
}

//---------------------------------------------------------------------------//
//! chi(Omega - k.v): response of a uniformly moving medium.
inline cplx doppler_chi(MaterialParams const& p,
                        double big_omega,
                        Vec3 const& k,
                        Vec3 const& v)
{
    return susceptibility(p, big_omega - dot(k, v));
}

//---------------------------------------------------------------------------//
/*!
 * One (n, m) term of the frequency-coupling expansion of the response of
 * an oscillating medium.
 *
 * The term couples Omega to Omega1 - (m + n) nu with weight
 * i^(n-m) J_n(kz z0) J_m(kz z0) and evaluates chi at Omega1 - n nu.
 */
struct SidebandTerm
{
    int n = 0;
    int m = 0;
    cplx weight{};
    double shift = 0.0;  // (m + n) nu
    double chi_arg = 0.0;  // Omega1 - n nu
};

struct SidebandExpansion
{
    std::vector<SidebandTerm> terms;
    //! Upper bound on 2 sum_{n > n_max} J_n^2 (the omitted elastic weight).
    double tail_bound = 0.0;
};

namespace detail
{
inline cplx i_power(int p)
{
    switch (((p % 4) + 4) % 4)
    {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

// 2 sum_{n > nmax} ((|x|/2)^n / n!)^2, which bounds 2 sum_{n>nmax} J_n(x)^2
inline double bessel_tail_bound(int nmax, double x)
{
    double const ax = std::abs(x);
    if (ax == 0.0)
        return 0.0;
    double sum = 0.0;
    for (int n = nmax + 1; n <= nmax + 400; ++n)
    {
        double const lt = n * std::log(ax / 2.0) - std::lgamma(n + 1.0);
        double const term = std::exp(2.0 * lt);
        sum += term;
        if (n > ax && term < 1e-18 * sum)
            break;
    }
    return 2.0 * sum;
}
}  // namespace detail

inline SidebandExpansion sideband_terms(MaterialParams const& /*p*/,
                                        double kz_z0,
                                        double nu,
                                        double omega1,
                                        int n_max)
{
    if (n_max < 0)
        throw PreconditionError("sideband_terms: n_max must be >= 0");
    auto const jpos = bessel_jn_sequence(n_max, kz_z0);
    auto jn = [&](int n) {
        double const v = jpos[static_cast<std::size_t>(std::abs(n))];
        return (n < 0 && (n % 2)) ? -v : v;
    };

    SidebandExpansion out;
    out.terms.reserve(static_cast<std::size_t>((2 * n_max + 1) * (2 * n_max + 1)));
    for (int n = -n_max; n <= n_max; ++n)
    {
        for (int m = -n_max; m <= n_max; ++m)
        {
            SidebandTerm t;
            t.n = n;
            t.m = m;
            t.weight = detail::i_power(n - m) * jn(n) * jn(m);
            t.shift = (m + n) * nu;
            t.chi_arg = omega1 - n * nu;
            out.terms.push_back(t);
        }
    }
    out.tail_bound = detail::bessel_tail_bound(n_max, kz_z0);
    return out;
}

//! Sum of the elastic-diagonal (m = -n) weights; tends to 1.
inline double elastic_weight_sum(SidebandExpansion const& e)
{
    double s = 0.0;
    for (auto const& t : e.terms)
    {
        if (t.m == -t.n)
            s += std::real(t.weight);
    }
    return s;
}

/*!
 * Effective response for slow oscillation (nu << Omega):
 * chi(Omega) sum_n i^(2n) J_n(x) J_{-n}(x), which is chi(Omega) once the
 * Bessel sum is complete.
 */
inline cplx effective_chi_slow(MaterialParams const& p,
                               double big_omega,
                               double kz_z0,
                               int n_max)
{
    auto const j = bessel_jn_sequence(n_max, kz_z0);
    auto jn = [&](int n) {
        double const v = j[static_cast<std::size_t>(std::abs(n))];
        return (n < 0 && (n % 2)) ? -v : v;
    };
    cplx s = 0.0;
    for (int n = -n_max; n <= n_max; ++n)
        s += detail::i_power(2 * n) * jn(n) * jn(-n);
    return susceptibility(p, big_omega) * s;
}

}  // namespace polariton
