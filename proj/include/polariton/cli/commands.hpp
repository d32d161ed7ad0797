#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "../amplitudes.hpp"
#include "../bath.hpp"
#include "../classical.hpp"
#include "../greens.hpp"
#include "../material.hpp"
#include "../scan.hpp"
#include "../spectra.hpp"
#include "../version.hpp"
#include "config.hpp"

namespace polariton::cli
{
enum ExitCode : int
{
    kExitSuccess = 0,
    kExitInvalidConfig = 1,
    kExitNonConvergence = 2,
    kExitValidationFailure = 3,
};

struct CommandOptions
{
    unsigned workers = 0;  // 0: hardware concurrency
    std::uint64_t seed = 20240611;
    bool inject_fault = false;  // validate only: corrupt the Green function
};

//---------------------------------------------------------------------------//
// OUTPUT
//---------------------------------------------------------------------------//
//! A cell is a number or a string; numbers print with 17 significant digits.
using Cell = std::variant<double, std::string>;

struct Table
{
    std::string kind;  // map, angular, rate, validate
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

inline std::string format_number(double x)
{
    if (std::isinf(x))
        return x < 0 ? "-inf" : "inf";
    if (std::isnan(x))
        return "nan";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline void write_csv(std::ostream& os, RunConfig const& cfg, Table const& t)
{
    os << "# tool: " << kToolName << "\n";
    os << "# version: " << kVersion << "\n";
    os << "# command: " << t.kind << "\n";
    os << "# scenario: " << scenario_name(cfg.scenario) << "\n";
    os << "# config_hash: " << config_hash(cfg) << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (auto const& row : t.rows)
    {
        for (std::size_t i = 0; i < row.size(); ++i)
        {
            if (i)
                os << ',';
            if (auto const* d = std::get_if<double>(&row[i]))
                os << format_number(*d);
            else
                os << std::get<std::string>(row[i]);
        }
        os << "\n";
    }
}

inline void write_json(std::ostream& os, RunConfig const& cfg, Table const& t)
{
    json rows = json::array();
    for (auto const& row : t.rows)
    {
        json r = json::array();
        for (auto const& c : row)
        {
            if (auto const* d = std::get_if<double>(&c))
            {
                // JSON has no infinities; keep the CSV sentinel text
                if (std::isfinite(*d))
                    r.push_back(*d);
                else
                    r.push_back(format_number(*d));
            }
            else
            {
                r.push_back(std::get<std::string>(c));
            }
        }
        rows.push_back(std::move(r));
    }
    json doc = {{"tool", kToolName},
                {"version", kVersion},
                {"command", t.kind},
                {"config_hash", config_hash(cfg)},
                {"config", to_json(cfg)},
                {"columns", t.columns},
                {"rows", std::move(rows)}};
    os << doc.dump(1) << "\n";
}

inline void emit(RunConfig const& cfg, Table const& t)
{
    auto write = [&](std::ostream& os) {
        if (cfg.output.format == OutputFormat::json)
            write_json(os, cfg, t);
        else
            write_csv(os, cfg, t);
    };
    if (cfg.output.path.empty())
    {
        write(std::cout);
        return;
    }
    std::ofstream out(cfg.output.path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot open output file '" + cfg.output.path + "'");
    write(out);
}

inline AmplitudeOptions amplitude_options(RunConfig const& cfg)
{
    AmplitudeOptions opt;
    opt.eta = cfg.bath.eta;
    opt.kz_guard = cfg.grid.kz_guard;
    return opt;
}

inline double log10_or_sentinel(double x)
{
    return x > 0.0 ? std::log10(x) : -std::numeric_limits<double>::infinity();
}

//---------------------------------------------------------------------------//
// COMMANDS
//---------------------------------------------------------------------------//
//! Spectral-density map over (omega, c|k|).
inline Table run_map(RunConfig const& cfg, CommandOptions const& opt)
{
    auto const samples = map_samples(cfg.material, cfg.scenario, cfg.grid,
                                     amplitude_options(cfg), opt.workers);
    double const scale = rho_scale(cfg.scenario);
    Table t{"map", {"omega", "ck", "rho", "log10_rho_normalized", "flags"}, {}};
    t.rows.reserve(samples.size());
    for (auto const& m : samples)
    {
        t.rows.push_back({m.omega, m.ck, m.sample.rho * scale,
                          log10_or_sentinel(m.sample.rho),
                          flag_string(m.sample.flags)});
    }
    return t;
}

//! Angular dependence at fixed (omega, |k|).
inline Table run_angular(RunConfig const& cfg, CommandOptions const& opt)
{
    auto const samples = angular_samples(cfg.material, cfg.scenario, cfg.grid,
                                         amplitude_options(cfg), opt.workers);
    double const scale = rho_scale(cfg.scenario);
    Table t{"angular", {"theta", "phi", "rho", "rho_normalized", "flags"}, {}};
    t.rows.reserve(samples.size());
    for (auto const& a : samples)
    {
        t.rows.push_back({a.theta, a.phi, a.sample.rho * scale, a.sample.rho,
                          flag_string(a.sample.flags)});
    }
    return t;
}

inline Table run_rate(RunConfig const& cfg,
                      CommandOptions const& opt,
                      RateResult* result = nullptr)
{
    auto const r = total_rate(cfg.material, cfg.scenario, cfg.grid,
                              amplitude_options(cfg), opt.workers);
    if (result)
        *result = r;
    auto const& g = cfg.grid.rate;
    Table t{"rate", {"quantity", "value"}, {}};
    t.rows = {
        {std::string("rate"), r.value},
        {std::string("rate_normalized"), r.normalized},
        {std::string("rate_normalized_doubled_cutoff"), r.doubled_normalized},
        {std::string("cutoff_change"), r.cutoff_change},
        {std::string("tolerance"), g.tolerance},
        {std::string("converged"), std::string(r.converged ? "true" : "false")},
        {std::string("samples"), static_cast<double>(r.samples)},
        {std::string("kz_skipped"), static_cast<double>(r.kz_skipped)},
        {std::string("k_max"), g.k_max},
        {std::string("k_count"), static_cast<double>(g.k_count)},
        {std::string("cos_count"), static_cast<double>(g.cos_count)},
        {std::string("phi_count"), static_cast<double>(g.phi_count)},
        {std::string("omega_count"), static_cast<double>(g.omega_count)},
    };
    return t;
}

//---------------------------------------------------------------------------//
// VALIDATION
//---------------------------------------------------------------------------//
struct CheckResult
{
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    bool informational = false;  // reported, never fails the run
};

namespace detail
{
inline CheckResult check(std::string name, double measured, double tol)
{
    return {std::move(name), measured, tol, measured < tol, false};
}

// Row i of A times k, written out component by component.
inline CDyad3 rows_cross(CDyad3 const& a, CVec3 const& k)
{
    CDyad3 r;
    for (std::size_t i = 0; i < 3; ++i)
    {
        r(i, 0) = a(i, 1) * k[2] - a(i, 2) * k[1];
        r(i, 1) = a(i, 2) * k[0] - a(i, 0) * k[2];
        r(i, 2) = a(i, 0) * k[1] - a(i, 1) * k[0];
    }
    return r;
}

// k times column j of A.
inline CDyad3 columns_cross(CVec3 const& k, CDyad3 const& a)
{
    CDyad3 r;
    for (std::size_t j = 0; j < 3; ++j)
    {
        r(0, j) = k[1] * a(2, j) - k[2] * a(1, j);
        r(1, j) = k[2] * a(0, j) - k[0] * a(2, j);
        r(2, j) = k[0] * a(1, j) - k[1] * a(0, j);
    }
    return r;
}
}  // namespace detail

/*!
 * Aggregate invariant checks over the configured material.
 *
 * Random samples are drawn from a generator seeded with opt.seed.
 */
inline std::vector<CheckResult>
run_validation_checks(RunConfig const& cfg, CommandOptions const& opt)
{
    MaterialParams const& p = cfg.material;
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto random_k = [&](double kmax) {
        return spherical(kmax * unit(rng), std::acos(2.0 * unit(rng) - 1.0),
                         2.0 * std::numbers::pi * unit(rng));
    };
    auto random_cdyad = [&] {
        CDyad3 a;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                a(i, j) = cplx{2.0 * unit(rng) - 1.0, 2.0 * unit(rng) - 1.0};
        return a;
    };

    std::vector<CheckResult> out;

    double kk = 0.0;
    for (int i = 0; i < 20; ++i)
    {
        double const w = std::pow(10.0, -2.0 + 4.0 * i / 19.0) * p.omega0;
        kk = std::max(kk, kk_residual(p, w).relative);
    }
    out.push_back(detail::check("kramers_kronig_relative", kk, 1e-5));

    double helm = 0.0;
    for (int i = 0; i < 1000; ++i)
    {
        Vec3 const k = random_k(5.0);
        double const w = 0.01 + 4.99 * unit(rng);
        CDyad3 g = green_k(p, k, w);
        if (opt.inject_fault)
            g(0, 1) += 1e-3 * frobenius(g);
        helm = std::max(helm, helmholtz_relative_residual(p, k, w, g));
    }
    out.push_back(detail::check("helmholtz_relative", helm, 1e-10));

    double bath = 0.0;
    for (double w2 : {0.3, 0.9, 1.0, 1.5, 2.9})
    {
        cplx const num = bath_integral_numeric(p, background_beta(p), w2,
                                               cfg.bath)
                             .value;
        cplx const ana = bath_integral_analytic(p, w2);
        bath = std::max(bath, std::abs(num - ana) / std::abs(ana));
    }
    out.push_back(detail::check("bath_identity_relative", bath, 1e-3));

    double sym_motion = 0.0, sym_eps = 0.0, sym_bump = 0.0;
    MotionScenario const ms;
    OscillatingEpsScenario const es;
    MovingBumpScenario const bs;
    AmplitudeOptions const aopt = amplitude_options(cfg);
    auto rel = [](CDyad3 const& a, CDyad3 const& b) {
        return frobenius(a - b) / std::max(frobenius(a), 1e-300);
    };
    for (int i = 0; i < 200; ++i)
    {
        Vec3 k1 = random_k(4.0);
        if (std::abs(k1.z) < 1e-3)
            k1.z = 1e-3;
        Vec3 const k2 = random_k(4.0);
        double const w1 = 0.05 + 3.95 * unit(rng);
        double const w2 = 0.05 + 3.95 * unit(rng);
        sym_motion = std::max(
            sym_motion, rel(amp_motion(p, ms, k1, w1, w2, aopt),
                            transpose(amp_motion(p, ms, -k1, w2, w1, aopt))));
        sym_eps = std::max(
            sym_eps, rel(amp_oscillating_eps(p, es, k1, w1, w2),
                         transpose(amp_oscillating_eps(p, es, -k1, w2, w1))));
        sym_bump = std::max(
            sym_bump, rel(amp_moving_bump(p, bs, k1, k2, w1, w2),
                          transpose(amp_moving_bump(p, bs, k2, k1, w2, w1))));
    }
    out.push_back(detail::check("exchange_symmetry_motion", sym_motion, 1e-12));
    out.push_back(detail::check("exchange_symmetry_eps", sym_eps, 1e-12));
    out.push_back(detail::check("exchange_symmetry_bump", sym_bump, 1e-12));

    double bessel = 0.0;
    for (double x : {0.5, 2.404826, 10.0})
    {
        auto const e = sideband_terms(p, x, 3.0, 1.0,
                                      static_cast<int>(std::ceil(x)) + 30);
        bessel = std::max(bessel, std::abs(elastic_weight_sum(e) - 1.0));
    }
    out.push_back(detail::check("bessel_elastic_sum", bessel, 1e-10));
    {
        auto const e = sideband_terms(p, 2.404826, 3.0, 1.0, 10);
        double w00 = 0.0;
        for (auto const& t : e.terms)
        {
            if (t.n == 0 && t.m == 0)
                w00 = std::abs(t.weight);
        }
        // J_0 vanishes at 2.404825557695773; the 7-digit argument leaves
        // a weight of order 1e-13
        out.push_back(detail::check("bessel_j0_zero_weight", w00, 1e-10));
    }

    {
        CosineVelocity const v{0.1, 3.0};
        double const e2 = delta_identity_check(v, 1e2, 3.0, 0.5).error;
        double const e3 = delta_identity_check(v, 1e3, 3.0, 0.5).error;
        double const e4 = delta_identity_check(v, 1e4, 3.0, 0.5).error;
        // 1/T decay means a tenfold drop per decade; accept >= 5x
        double const worst_ratio = std::min(e2 / e3, e3 / e4);
        out.push_back({"delta_identity_decay_per_decade", worst_ratio, 5.0,
                       worst_ratio > 5.0, false});
    }

    double right = 0.0, left = 0.0, between = 0.0;
    for (int i = 0; i < 100; ++i)
    {
        CDyad3 const a = random_cdyad();
        CVec3 const k = CVec3(random_k(3.0));
        right = std::max(right, frobenius(cross_right(a, k)
                                          - detail::rows_cross(a, k)));
        left = std::max(left, frobenius(cross_left(k, a)
                                        - detail::columns_cross(k, a)));
        between = std::max(between,
                           frobenius(cross_right(a, k) - cross_left(k, a)));
    }
    out.push_back(detail::check("cross_right_rows_convention", right, 1e-13));
    out.push_back(detail::check("cross_left_columns_convention", left, 1e-13));
    out.push_back({"cross_conventions_difference", between, 0.0, true, true});
    return out;
}

inline Table run_validate(RunConfig const& cfg,
                          CommandOptions const& opt,
                          bool* all_pass = nullptr)
{
    auto const checks = run_validation_checks(cfg, opt);
    Table t{"validate", {"check", "measured", "tolerance", "status"}, {}};
    bool ok = true;
    for (auto const& c : checks)
    {
        std::string status = c.informational ? "info"
                                             : (c.pass ? "pass" : "FAIL");
        ok = ok && (c.informational || c.pass);
        t.rows.push_back({c.name, c.measured, c.tolerance, status});
    }
    if (all_pass)
        *all_pass = ok;
    return t;
}

//---------------------------------------------------------------------------//
// ENTRY POINTS
//---------------------------------------------------------------------------//
inline void report_error(std::string const& kind, std::string const& message)
{
    json const rec = {{"error", kind}, {"message", message}};
    std::cerr << rec.dump() << "\n";
}

/*!
 * Run a subcommand and translate failures into exit codes.
 *
 * Invalid configuration (including violated preconditions) gives 1,
 * non-convergence 2 and failed validation 3.
 */
inline int dispatch(std::string const& command,
                    RunConfig const& cfg,
                    CommandOptions const& opt)
{
    try
    {
        if (command == "map")
        {
            emit(cfg, run_map(cfg, opt));
            return kExitSuccess;
        }
        if (command == "angular")
        {
            emit(cfg, run_angular(cfg, opt));
            return kExitSuccess;
        }
        if (command == "rate")
        {
            RateResult r;
            emit(cfg, run_rate(cfg, opt, &r));
            if (!r.converged)
            {
                report_error("non_convergence",
                             "cutoff doubling changed the rate by "
                                 + format_number(r.cutoff_change)
                                 + " (tolerance "
                                 + format_number(cfg.grid.rate.tolerance)
                                 + ")");
                return kExitNonConvergence;
            }
            return kExitSuccess;
        }
        if (command == "validate")
        {
            bool ok = false;
            auto const t = run_validate(cfg, opt, &ok);
            emit(cfg, t);
            if (!ok)
            {
                for (auto const& row : t.rows)
                {
                    if (std::get<std::string>(row[3]) == "FAIL")
                    {
                        report_error("validation_failure",
                                     std::get<std::string>(row[0])
                                         + ": measured "
                                         + format_number(std::get<double>(row[1]))
                                         + ", tolerance "
                                         + format_number(std::get<double>(row[2])));
                    }
                }
                return kExitValidationFailure;
            }
            return kExitSuccess;
        }
        report_error("invalid_config", "unknown command '" + command + "'");
        return kExitInvalidConfig;
    }
    catch (ConfigError const& e)
    {
        report_error("invalid_config", e.what());
        return kExitInvalidConfig;
    }
    catch (PreconditionError const& e)
    {
        report_error("invalid_config", e.what());
        return kExitInvalidConfig;
    }
}

}  // namespace polariton::cli
