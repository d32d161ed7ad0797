#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <type_traits>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace polariton
{
struct QuadratureSettings
{
    double rel_tol = 1e-12;
    double abs_tol = 0.0;
    std::size_t max_intervals = 4000;
};

template<class T>
struct QuadratureResult
{
    T value{};
    double error = 0.0;  // summed |K15 - G7| over the final partition
    double l1 = 0.0;  // integral of |f|
    std::size_t intervals = 0;
    bool converged = true;
};

namespace detail
{
template<class T>
struct Panel
{
    double a;
    double b;
    T value;
    double error;
    double l1;
    bool mapped = false;  // panel lives in the t-space of the infinite tail

    bool operator<(Panel const& o) const { return error < o.error; }
};

template<class T, class F>
Panel<T> gauss_kronrod_panel(F& f, double a, double b)
{
    using kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
    using gauss = boost::math::quadrature::gauss<double, 7>;
    auto const& xk = kronrod::abscissa();
    auto const& wk = kronrod::weights();
    auto const& wg = gauss::weights();

    double const mid = 0.5 * (a + b);
    double const half = 0.5 * (b - a);

    // Abscissae are stored non-negative; even Kronrod indices coincide with
    // the Gauss nodes.
    T const f0 = f(mid);
    T k = wk[0] * f0;
    T g = wg[0] * f0;
    double l1 = wk[0] * std::abs(f0);
    for (std::size_t i = 1; i < xk.size(); ++i)
    {
        T const fp = f(mid + half * xk[i]);
        T const fm = f(mid - half * xk[i]);
        k += wk[i] * (fp + fm);
        l1 += wk[i] * (std::abs(fp) + std::abs(fm));
        if (i % 2 == 0)
            g += wg[i / 2] * (fp + fm);
    }
    return {a, b, half * k, std::abs(half * (k - g)), std::abs(half) * l1,
            false};
}
}  // namespace detail

/*!
 * Globally adaptive G7/K15 quadrature over ordered breakpoints.
 *
 * The panel with the largest error estimate is bisected until the total
 * error falls below max(abs_tol, rel_tol |I|). A trailing +infinity
 * breakpoint is mapped to [0, 1) with x = a + t / (1 - t).
 */
template<class F>
auto integrate_pieces(F&& f,
                      std::vector<double> breaks,
                      QuadratureSettings const& s = {})
{
    using T = std::invoke_result_t<F&, double>;

    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    QuadratureResult<T> out;
    if (breaks.size() < 2)
        return out;

    bool const infinite = std::isinf(breaks.back());
    double const last_finite = infinite ? breaks[breaks.size() - 2] : 0.0;
    auto mapped = [&](double t) -> T {
        double const u = 1.0 - t;
        return f(last_finite + t / u) / (u * u);
    };

    std::priority_queue<detail::Panel<T>> work;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    {
        if (infinite && i + 2 == breaks.size())
        {
            auto panel = detail::gauss_kronrod_panel<T>(mapped, 0.0, 1.0);
            panel.mapped = true;
            work.push(panel);
        }
        else
        {
            work.push(
                detail::gauss_kronrod_panel<T>(f, breaks[i], breaks[i + 1]));
        }
    }

    auto totals = [&] {
        auto copy = work;
        T v{};
        double e = 0.0, l = 0.0;
        while (!copy.empty())
        {
            v += copy.top().value;
            e += copy.top().error;
            l += copy.top().l1;
            copy.pop();
        }
        return std::tuple{v, e, l};
    };

    auto [value, error, l1] = totals();
    while (error > std::max(s.abs_tol, s.rel_tol * std::abs(value))
           && work.size() < s.max_intervals)
    {
        auto worst = work.top();
        work.pop();
        double const m = 0.5 * (worst.a + worst.b);
        if (!(worst.b - worst.a > 1e-13 * std::max(1.0, std::abs(m))))
        {
            // interval exhausted at double precision; keep its estimate
            work.push(worst);
            break;
        }
        detail::Panel<T> left, right;
        if (worst.mapped)
        {
            left = detail::gauss_kronrod_panel<T>(mapped, worst.a, m);
            right = detail::gauss_kronrod_panel<T>(mapped, m, worst.b);
            left.mapped = right.mapped = true;
        }
        else
        {
            left = detail::gauss_kronrod_panel<T>(f, worst.a, m);
            right = detail::gauss_kronrod_panel<T>(f, m, worst.b);
        }
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        l1 += left.l1 + right.l1 - worst.l1;
        work.push(left);
        work.push(right);
    }

    std::tie(out.value, out.error, out.l1) = totals();
    out.intervals = work.size();
    out.converged = out.error
                    <= std::max(s.abs_tol, s.rel_tol * std::abs(out.value));
    return out;
}

}  // namespace polariton
