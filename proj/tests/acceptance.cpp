// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if
// any criterion fails. Tolerances are fixed here and not configurable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "polariton/amplitudes.hpp"
#include "polariton/bath.hpp"
#include "polariton/classical.hpp"
#include "polariton/greens.hpp"
#include "polariton/material.hpp"
#include "polariton/scan.hpp"
#include "polariton/spectra.hpp"

using namespace polariton;
using cd = std::complex<double>;

namespace
{
constexpr double kKkTol = 1e-5;
constexpr double kKkSeconds = 10.0;
constexpr double kHelmholtzTol = 1e-10;
constexpr double kHelmholtzSeconds = 1.0;
constexpr double kBathTol = 1e-3;
constexpr double kBathSeconds = 30.0;
constexpr double kMapSeconds = 60.0;
constexpr int kRidgeWindowCells = 20;  // 10% of a 200-cell axis
constexpr double kRidgeWindowFraction = 0.10;
constexpr double kIsotropyTol = 1e-12;
constexpr double kRidgeAgreementCells = 1.0;
constexpr double kRingContrast = 10.0;
constexpr int kRingsRequired = 2;
constexpr double kDeltaSlopeMin = -1.25;
constexpr double kDeltaSlopeMax = -0.75;
constexpr double kBesselTol = 1e-10;
constexpr double kExchangeTol = 1e-13;

MaterialParams const mat{};

int failures = 0;

void report(int id, char const* name, bool pass, std::string const& detail)
{
    std::printf("[%s] %2d %-28s %s\n", pass ? "PASS" : "FAIL", id, name,
                detail.c_str());
    std::fflush(stdout);
    if (!pass)
        ++failures;
}

std::string fmt(char const* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof(buf), f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

// Lorentz response evaluated independently of the library.
cd eps_ref(double w)
{
    return 1.0 + mat.omega_p * mat.omega_p
                     / cd(mat.omega0 * mat.omega0 - w * w, -mat.gamma * w);
}

double rel_diff(CDyad3 const& a, CDyad3 const& b)
{
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
        {
            num += std::norm(a(i, j) - b(i, j));
            den += std::norm(a(i, j));
        }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

//---------------------------------------------------------------------------//
// Ridge extraction on a rho(omega, ck) map stored omega-major.

struct Map
{
    std::vector<double> w, k;
    std::vector<double> rho;  // rho[i * k.size() + j]
    double at(std::size_t i, std::size_t j) const
    {
        return rho[i * k.size() + j];
    }
};

Map to_map(std::vector<MapSample> const& s, ScanGrid const& g)
{
    Map m;
    for (int i = 0; i < g.omega.count; ++i)
        m.w.push_back(g.omega.node(i));
    for (int j = 0; j < g.ck.count; ++j)
        m.k.push_back(g.ck.node(j));
    for (auto const& x : s)
        m.rho.push_back(x.sample.rho);
    return m;
}

using Ridge = std::map<int, int>;  // cut index -> ridge cell

// Local maxima along omega (per ck column) within the window of `target`.
Ridge resonance_ridge(Map const& m, double target)
{
    Ridge r;
    int const nw = static_cast<int>(m.w.size());
    for (std::size_t j = 0; j < m.k.size(); ++j)
    {
        int best = -1;
        for (int i = 1; i + 1 < nw; ++i)
        {
            double const v = m.at(i, j);
            if (!(v > m.at(i - 1, j) && v > m.at(i + 1, j)))
                continue;
            if (std::abs(m.w[i] - target) > kRidgeWindowFraction * target)
                continue;
            if (best < 0
                || std::abs(m.w[i] - target) < std::abs(m.w[best] - target))
                best = i;
        }
        if (best >= 0)
            r[static_cast<int>(j)] = best;
    }
    return r;
}

// Local maxima along ck (per omega row) near c|k| = sqrt(Re eps(x)) x,
// x = omega (photon 1) or nu - omega (photon 2).
Ridge dispersion_ridge(Map const& m, bool partner, double nu)
{
    Ridge r;
    int const nk = static_cast<int>(m.k.size());
    for (std::size_t i = 0; i < m.w.size(); ++i)
    {
        if (!(m.w[i] > 0.3 && m.w[i] < 2.7))
            continue;
        double const x = partner ? nu - m.w[i] : m.w[i];
        double const re = eps_ref(x).real();
        if (re <= 0.0)
            continue;
        double const root = std::sqrt(re) * x;
        int best = -1;
        for (int j = 1; j + 1 < nk; ++j)
        {
            double const v = m.at(i, j);
            if (!(v > m.at(i, j - 1) && v > m.at(i, j + 1)))
                continue;
            if (std::abs(m.k[j] - root) > kRidgeWindowFraction * root)
                continue;
            if (best < 0 || std::abs(m.k[j] - root) < std::abs(m.k[best] - root))
                best = j;
        }
        if (best >= 0)
            r[static_cast<int>(i)] = best;
    }
    return r;
}

int longest_run(Ridge const& r)
{
    int best = 0, run = 0, prev = -2;
    for (auto const& [cut, cell] : r)
    {
        run = cut == prev + 1 ? run + 1 : 1;
        best = std::max(best, run);
        prev = cut;
    }
    return best;
}

struct Families
{
    std::vector<std::string> names{"res_w0", "res_2w0", "disp_w", "disp_nu-w"};
    std::vector<Ridge> ridges;
};

Families ridge_families(Map const& m, double nu)
{
    Families f;
    f.ridges = {resonance_ridge(m, 1.0), resonance_ridge(m, 2.0),
                dispersion_ridge(m, false, nu), dispersion_ridge(m, true, nu)};
    return f;
}

double median(std::vector<double> v)
{
    if (v.empty())
        return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    std::size_t const n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

//---------------------------------------------------------------------------//
void kramers_kronig()
{
    auto const t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    bool conv = true;
    for (int i = 0; i < 20; ++i)
    {
        double const w = std::pow(10.0, -2.0 + 4.0 * i / 19.0);
        auto const r = kk_residual(mat, w);
        worst = std::max(worst, r.relative);
        conv = conv && r.converged;
    }
    double const t = seconds_since(t0);
    report(1, "kramers_kronig_closure",
           worst < kKkTol && t < kKkSeconds && conv,
           fmt("max_rel=%.3e tol=%.0e time=%.3fs limit=%.0fs", worst, kKkTol, t,
               kKkSeconds));
}

void green_identity()
{
    std::mt19937_64 rng(1001);
    std::uniform_real_distribution<double> uk(-4.0, 4.0), uw(0.01, 4.0);
    auto const t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int n = 0; n < 1000; ++n)
    {
        Vec3 const k{uk(rng), uk(rng), uk(rng)};
        double const w = uw(rng);
        CDyad3 const g = green_k(mat, k, w);
        // (|k|^2 - q^2) I - k k, built component-wise
        cd const q2 = eps_ref(w) * w * w;
        double const kv[3] = {k.x, k.y, k.z};
        double const k2 = kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2];
        cd op[3][3];
        double op_norm = 0.0, g_norm = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
            {
                op[i][j] = (i == j ? k2 - q2 : cd{}) - kv[i] * kv[j];
                op_norm += std::norm(op[i][j]);
                g_norm += std::norm(g(i, j));
            }
        double res = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
            {
                cd s = i == j ? -1.0 : 0.0;
                for (int l = 0; l < 3; ++l)
                    s += op[i][l] * g(l, j);
                res += std::norm(s);
            }
        worst = std::max(worst,
                         std::sqrt(res) / std::sqrt(op_norm * g_norm));
    }
    double const t = seconds_since(t0);
    report(2, "green_function_identity",
           worst < kHelmholtzTol && t < kHelmholtzSeconds,
           fmt("max_rel=%.3e tol=%.0e samples=1000 time=%.3fs limit=%.0fs",
               worst, kHelmholtzTol, t, kHelmholtzSeconds));
}

void bath_identity()
{
    auto const t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    bool conv = true;
    for (double w : {0.3, 0.9, 1.0, 1.5, 2.9})
    {
        auto const r = bath_integral_numeric(mat, background_beta(mat), w);
        cd const expect = std::conj(eps_ref(w) - 1.0);
        worst = std::max(worst, std::abs(r.value - expect) / std::abs(expect));
        conv = conv && r.converged;
    }
    double const t = seconds_since(t0);
    report(3, "bath_integral_identity",
           worst < kBathTol && t < kBathSeconds && conv,
           fmt("max_rel=%.3e tol=%.0e time=%.3fs limit=%.0fs", worst, kBathTol,
               t, kBathSeconds));
}

void uniform_null()
{
    ScanGrid g;
    auto const r = total_rate(mat, UniformMotionScenario{}, g);
    report(4, "uniform_motion_null_rate", r.value == 0.0 && r.doubled_normalized == 0.0,
           fmt("rate=%.17g doubled=%.17g samples=%zu", r.value,
               r.doubled_normalized, r.samples));
}

struct Maps
{
    ScanGrid grid;
    Map motion, eps, bump;
    double motion_seconds = 0.0;
};

Maps build_maps()
{
    Maps m;
    auto const t0 = std::chrono::steady_clock::now();
    auto const s = map_samples(mat, MotionScenario{}, m.grid, {}, 1);
    m.motion_seconds = seconds_since(t0);
    m.motion = to_map(s, m.grid);
    m.eps = to_map(map_samples(mat, OscillatingEpsScenario{}, m.grid, {}, 0),
                   m.grid);
    m.bump = to_map(map_samples(mat, MovingBumpScenario{}, m.grid, {}, 0),
                    m.grid);
    return m;
}

void theta_support(Maps const& m)
{
    double const nu = 3.0;
    std::size_t bad = 0, zero_cells = 0, positive_outside = 0;
    for (Map const* map : {&m.motion, &m.eps})
    {
        for (std::size_t i = 0; i < map->w.size(); ++i)
            for (std::size_t j = 0; j < map->k.size(); ++j)
            {
                double const r = map->at(i, j);
                if (map->w[i] >= nu)
                {
                    ++zero_cells;
                    bad += r != 0.0;
                }
                else
                    positive_outside += r > 0.0;
            }
    }
    MovingBumpScenario const b;
    for (std::size_t i = 0; i < m.bump.w.size(); ++i)
        for (std::size_t j = 0; j < m.bump.k.size(); ++j)
        {
            double const kz_sum = 2.0 * m.bump.k[j] * m.grid.inclination_cos;
            double const r = m.bump.at(i, j);
            if (b.v * kz_sum <= m.bump.w[i])
            {
                ++zero_cells;
                bad += r != 0.0;
            }
            else
                positive_outside += r > 0.0;
        }
    report(5, "theta_support", bad == 0 && positive_outside > 0,
           fmt("nonzero_in_forbidden=%zu of %zu positive_elsewhere=%zu", bad,
               zero_cells, positive_outside));
}

void motion_ridges(Maps const& m)
{
    auto const f = ridge_families(m.motion, 3.0);
    bool ok = m.motion_seconds < kMapSeconds;
    std::string detail;
    for (std::size_t n = 0; n < f.ridges.size(); ++n)
    {
        int const run = longest_run(f.ridges[n]);
        ok = ok && run >= kRidgeWindowCells;
        detail += fmt("%s run=%d ", f.names[n].c_str(), run);
    }
    detail += fmt("(need>=%d) time=%.3fs limit=%.0fs", kRidgeWindowCells,
                  m.motion_seconds, kMapSeconds);
    report(6, "motion_map_ridges", ok, detail);
}

void motion_anisotropy()
{
    ScanGrid g;
    auto const s = angular_samples(mat, MotionScenario{}, g, {}, 0);
    std::size_t best = 0;
    for (std::size_t i = 1; i < s.size(); ++i)
    {
        if (s[i].sample.rho > s[best].sample.rho)
            best = i;
    }
    int const polar = static_cast<int>(best / g.azimuth_count);
    bool const near_axis = polar <= 1 || polar >= g.polar_count - 2;
    report(7, "motion_angular_maximum", near_axis,
           fmt("argmax theta=%.4f rad (polar cell %d of %d) rho=%.4e; "
               "need cell <=1 or >=%d",
               s[best].theta, polar, g.polar_count, s[best].sample.rho,
               g.polar_count - 2));
}

void eps_isotropy(Maps const& m)
{
    ScanGrid g;
    auto const s = angular_samples(mat, OscillatingEpsScenario{}, g, {}, 0);
    double lo = s.front().sample.rho, hi = lo;
    for (auto const& x : s)
    {
        lo = std::min(lo, x.sample.rho);
        hi = std::max(hi, x.sample.rho);
    }
    double const spread = (hi - lo) / hi;
    bool ok = spread < kIsotropyTol;

    auto const fm = ridge_families(m.motion, 3.0);
    auto const fe = ridge_families(m.eps, 3.0);
    std::string detail = fmt("spread=%.3e tol=%.0e; ridge median offset (cells):",
                             spread, kIsotropyTol);
    for (std::size_t n = 0; n < fm.ridges.size(); ++n)
    {
        std::vector<double> d;
        for (auto const& [cut, cell] : fm.ridges[n])
        {
            auto const it = fe.ridges[n].find(cut);
            if (it != fe.ridges[n].end())
                d.push_back(std::abs(it->second - cell));
        }
        double const med = median(d);
        ok = ok && !d.empty() && med <= kRidgeAgreementCells;
        detail += fmt(" %s=%g(n=%zu)", fm.names[n].c_str(), med, d.size());
    }
    detail += fmt(" tol=%g", kRidgeAgreementCells);
    report(8, "eps_isotropy_and_ridges", ok, detail);
}

void bump_structure(Maps const& m)
{
    ScanGrid g;
    MovingBumpScenario const b;
    auto const s = angular_samples(mat, b, g, {}, 0);
    double const ck = default_angular_ck(b);
    double const k1z = ck * g.inclination_cos;

    std::size_t bad = 0;
    std::vector<double> profile(static_cast<std::size_t>(g.polar_count), 0.0);
    for (auto const& x : s)
    {
        double const k2z = ck * std::cos(x.theta);
        if (b.v * (k1z + k2z) <= g.angular_omega)
            bad += x.sample.rho != 0.0;
    }
    for (std::size_t i = 0; i < s.size(); ++i)
        profile[i / g.azimuth_count] += s[i].sample.rho / g.azimuth_count;

    // map zero region
    for (std::size_t i = 0; i < m.bump.w.size(); ++i)
        for (std::size_t j = 0; j < m.bump.k.size(); ++j)
        {
            double const kz_sum = 2.0 * m.bump.k[j] * m.grid.inclination_cos;
            if (b.v * kz_sum <= m.bump.w[i])
                bad += m.bump.at(i, j) != 0.0;
        }

    std::vector<int> maxima;
    for (int t = 1; t + 1 < g.polar_count; ++t)
    {
        if (profile[t] > profile[t - 1] && profile[t] > profile[t + 1])
            maxima.push_back(t);
    }
    std::vector<double> rest;
    for (int t = 0; t < g.polar_count; ++t)
    {
        bool near = false;
        for (int mx : maxima)
            near = near || std::abs(t - mx) <= 2;
        if (!near && profile[t] > 0.0)
            rest.push_back(profile[t]);
    }
    double const med = median(rest);
    int rings = 0;
    for (int mx : maxima)
        rings += profile[mx] > kRingContrast * med;

    report(9, "bump_zero_region_and_rings", bad == 0 && rings >= kRingsRequired,
           fmt("nonzero_in_forbidden=%zu rings=%d (need>=%d) local_maxima=%zu "
               "peak_profile=%.3e median=%.3e",
               bad, rings, kRingsRequired, maxima.size(),
               *std::max_element(profile.begin(), profile.end()), med));
}

// Composite Simpson over [lo, hi] with `per_period` nodes per 2 pi / T.
double smoothed_weight(CosineVelocity const& v, double big_t)
{
    double const centre = 3.0, width = 0.5;
    double const lo = centre - 12.0 * width, hi = centre + 12.0 * width;
    double const h0 = 2.0 * std::numbers::pi / big_t / 32.0;
    auto const n = static_cast<long>(std::ceil((hi - lo) / h0 / 2.0)) * 2;
    double const h = (hi - lo) / static_cast<double>(n);
    auto f = [&](double x) {
        double const u = (x - centre) / width;
        return finite_time_weight(v, x, big_t) * std::exp(-0.5 * u * u);
    };
    double s = f(lo) + f(hi);
    for (long i = 1; i < n; ++i)
        s += (i % 2 ? 4.0 : 2.0) * f(lo + static_cast<double>(i) * h);
    return s * h / 3.0;
}

void delta_identity()
{
    CosineVelocity const v{0.1, 3.0};
    double const norm = 0.5 * std::numbers::pi * v.z0 * v.z0 * v.nu * v.nu;
    double const target = 1.0 + std::exp(-0.5 * 144.0);
    std::vector<double> ts{1e2, 1e3, 1e4}, errs;
    for (double t : ts)
        errs.push_back(std::abs(smoothed_weight(v, t) / norm - target));
    // least-squares slope of log(error) against log(T)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ts.size(); ++i)
    {
        double const x = std::log10(ts[i]), y = std::log10(errs[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double const n = static_cast<double>(ts.size());
    double const slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    bool const mono = errs[0] > errs[1] && errs[1] > errs[2];
    report(10, "finite_time_delta_limit",
           mono && slope >= kDeltaSlopeMin && slope <= kDeltaSlopeMax,
           fmt("err(T=1e2,1e3,1e4)=%.3e,%.3e,%.3e slope=%.3f need [%.2f,%.2f]",
               errs[0], errs[1], errs[2], slope, kDeltaSlopeMin,
               kDeltaSlopeMax));
}

void bessel()
{
    double worst_sum = 0.0, worst_ref = 0.0;
    for (double x : {0.5, 2.404826, 10.0})
    {
        auto const e = sideband_terms(mat, x, 3.0, 1.0, 60);
        worst_sum = std::max(worst_sum, std::abs(elastic_weight_sum(e) - 1.0));
        for (int n = 0; n <= 20; ++n)
        {
            worst_ref = std::max(
                worst_ref, std::abs(bessel_jn(n, x) - std::cyl_bessel_j(n, x)));
        }
    }
    double w00 = 0.0;
    for (auto const& t : sideband_terms(mat, 2.404826, 3.0, 1.0, 10).terms)
    {
        if (t.n == 0 && t.m == 0)
            w00 = std::abs(t.weight);
    }
    report(11, "bessel_sidebands",
           worst_sum < kBesselTol && w00 < kBesselTol && worst_ref < kBesselTol,
           fmt("|sum-1|=%.3e |w00(j01)|=%.3e |Jn-std|=%.3e tol=%.0e", worst_sum,
               w00, worst_ref, kBesselTol));
}

void exchange()
{
    std::mt19937_64 rng(1012);
    std::uniform_real_distribution<double> uk(-3.0, 3.0), uw(0.05, 4.0);
    double wm = 0.0, we = 0.0, wb = 0.0;
    MotionScenario const sm;
    OscillatingEpsScenario const se;
    MovingBumpScenario const sb;
    int done = 0;
    while (done < 1000)
    {
        Vec3 const k1{uk(rng), uk(rng), uk(rng)};
        Vec3 const k2{uk(rng), uk(rng), uk(rng)};
        double const w1 = uw(rng), w2 = uw(rng);
        if (std::abs(k1.z) < 1e-3)
            continue;  // motion amplitude is undefined on the k_z node
        ++done;
        wm = std::max(wm, rel_diff(amp_motion(mat, sm, k1, w1, w2),
                                   transpose(amp_motion(mat, sm, -k1, w2, w1))));
        we = std::max(
            we, rel_diff(amp_oscillating_eps(mat, se, k1, w1, w2),
                         transpose(amp_oscillating_eps(mat, se, -k1, w2, w1))));
        wb = std::max(wb,
                      rel_diff(amp_moving_bump(mat, sb, k1, k2, w1, w2),
                               transpose(amp_moving_bump(mat, sb, k2, k1, w2, w1))));
    }
    double const worst = std::max({wm, we, wb});
    report(12, "exchange_symmetry", worst < kExchangeTol,
           fmt("motion=%.2e eps=%.2e bump=%.2e tol=%.0e samples=%d", wm, we, wb,
               kExchangeTol, done));
}

}  // namespace

int main()
{
    kramers_kronig();
    green_identity();
    bath_identity();
    uniform_null();
    Maps const maps = build_maps();
    theta_support(maps);
    motion_ridges(maps);
    motion_anisotropy();
    eps_isotropy(maps);
    bump_structure(maps);
    delta_identity();
    bessel();
    exchange();
    std::printf("%d of 12 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
