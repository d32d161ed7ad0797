#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "../bath.hpp"
#include "../material.hpp"
#include "../spectra.hpp"

namespace polariton::cli
{
using json = nlohmann::json;

class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat
{
    csv,
    json,
};

struct OutputSettings
{
    std::string path;  // empty: standard output
    OutputFormat format = OutputFormat::csv;

    friend bool operator==(OutputSettings const&, OutputSettings const&)
        = default;
};

struct RunConfig
{
    MaterialParams material;
    Scenario scenario = MotionScenario{};
    ScanGrid grid;
    BathIntegralSettings bath;
    OutputSettings output;

    friend bool operator==(RunConfig const&, RunConfig const&) = default;
};

namespace detail
{
// Rejects keys outside `allowed`; `where` names the object in messages.
inline void check_keys(json const& j,
                       std::set<std::string> const& allowed,
                       std::string const& where)
{
    if (!j.is_object())
        throw ConfigError(where + ": expected an object");
    for (auto const& item : j.items())
    {
        if (!allowed.count(item.key()))
            throw ConfigError(where + ": unknown key '" + item.key() + "'");
    }
}

inline void read(json const& j, char const* key, double& out,
                 std::string const& where)
{
    if (!j.contains(key))
        return;
    if (!j[key].is_number())
        throw ConfigError(where + "." + key + ": expected a number");
    out = j[key].get<double>();
}

inline void read(json const& j, char const* key, int& out,
                 std::string const& where)
{
    if (!j.contains(key))
        return;
    if (!j[key].is_number_integer())
        throw ConfigError(where + "." + key + ": expected an integer");
    out = j[key].get<int>();
}

inline void read(json const& j, char const* key, bool& out,
                 std::string const& where)
{
    if (!j.contains(key))
        return;
    if (!j[key].is_boolean())
        throw ConfigError(where + "." + key + ": expected a boolean");
    out = j[key].get<bool>();
}

inline void read(json const& j, char const* key, std::string& out,
                 std::string const& where)
{
    if (!j.contains(key))
        return;
    if (!j[key].is_string())
        throw ConfigError(where + "." + key + ": expected a string");
    out = j[key].get<std::string>();
}

inline Axis parse_axis(json const& j, Axis a, std::string const& where)
{
    check_keys(j, {"min", "max", "count"}, where);
    read(j, "min", a.min, where);
    read(j, "max", a.max, where);
    read(j, "count", a.count, where);
    return a;
}

inline json axis_json(Axis const& a)
{
    return {{"min", a.min}, {"max", a.max}, {"count", a.count}};
}

inline Scenario parse_scenario(json const& j)
{
    std::string const where = "scenario";
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError("scenario: 'kind' is required");
    std::string kind;
    read(j, "kind", kind, where);
    if (kind == "motion")
    {
        check_keys(j, {"kind", "z0", "nu"}, where);
        MotionScenario s;
        read(j, "z0", s.z0, where);
        read(j, "nu", s.nu, where);
        return s;
    }
    if (kind == "uniform_motion")
    {
        check_keys(j, {"kind", "v"}, where);
        UniformMotionScenario s;
        read(j, "v", s.v, where);
        return s;
    }
    if (kind == "oscillating_eps")
    {
        check_keys(j, {"kind", "alpha0", "nu", "beta_mode", "beta_scale"},
                   where);
        OscillatingEpsScenario s;
        read(j, "alpha0", s.alpha0, where);
        read(j, "nu", s.nu, where);
        read(j, "beta_scale", s.beta_scale, where);
        std::string mode = "background";
        read(j, "beta_mode", mode, where);
        if (mode == "background")
            s.beta_mode = BetaMode::background;
        else if (mode == "scaled")
            s.beta_mode = BetaMode::scaled;
        else
            throw ConfigError("scenario.beta_mode: expected 'background' or "
                              "'scaled'");
        return s;
    }
    if (kind == "moving_bump")
    {
        check_keys(j, {"kind", "v", "sigma", "f0"}, where);
        MovingBumpScenario s;
        read(j, "v", s.v, where);
        read(j, "sigma", s.sigma, where);
        read(j, "f0", s.f0, where);
        return s;
    }
    throw ConfigError("scenario.kind: unknown scenario '" + kind + "'");
}

inline json scenario_json(Scenario const& s)
{
    return std::visit(
        [](auto const& sc) -> json {
            using T = std::decay_t<decltype(sc)>;
            if constexpr (std::is_same_v<T, MotionScenario>)
                return {{"kind", "motion"}, {"z0", sc.z0}, {"nu", sc.nu}};
            else if constexpr (std::is_same_v<T, UniformMotionScenario>)
                return {{"kind", "uniform_motion"}, {"v", sc.v}};
            else if constexpr (std::is_same_v<T, OscillatingEpsScenario>)
                return {{"kind", "oscillating_eps"},
                        {"alpha0", sc.alpha0},
                        {"nu", sc.nu},
                        {"beta_mode",
                         sc.beta_mode == BetaMode::scaled ? "scaled"
                                                          : "background"},
                        {"beta_scale", sc.beta_scale}};
            else
                return {{"kind", "moving_bump"},
                        {"v", sc.v},
                        {"sigma", sc.sigma},
                        {"f0", sc.f0}};
        },
        s);
}
}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Build a run configuration from a JSON document.
 *
 * Missing keys take their defaults; unknown keys and ill-typed values are
 * rejected, and the result is checked against every module's invariants.
 */
inline RunConfig parse_config(json const& j)
{
    using detail::read;
    RunConfig c;
    detail::check_keys(j, {"material", "scenario", "grid", "bath", "output"},
                       "config");

    if (j.contains("material"))
    {
        auto const& m = j["material"];
        detail::check_keys(m, {"omega0", "omega_p", "gamma"}, "material");
        read(m, "omega0", c.material.omega0, "material");
        read(m, "omega_p", c.material.omega_p, "material");
        read(m, "gamma", c.material.gamma, "material");
    }
    if (j.contains("scenario"))
        c.scenario = detail::parse_scenario(j["scenario"]);

    if (j.contains("grid"))
    {
        auto const& g = j["grid"];
        detail::check_keys(g,
                           {"omega", "ck", "inclination_cos", "bump_azimuth",
                            "polar_count", "azimuth_count", "angular_omega",
                            "angular_ck", "kz_guard", "rate"},
                           "grid");
        if (g.contains("omega"))
            c.grid.omega = detail::parse_axis(g["omega"], c.grid.omega,
                                              "grid.omega");
        if (g.contains("ck"))
            c.grid.ck = detail::parse_axis(g["ck"], c.grid.ck, "grid.ck");
        read(g, "inclination_cos", c.grid.inclination_cos, "grid");
        read(g, "bump_azimuth", c.grid.bump_azimuth, "grid");
        read(g, "polar_count", c.grid.polar_count, "grid");
        read(g, "azimuth_count", c.grid.azimuth_count, "grid");
        read(g, "angular_omega", c.grid.angular_omega, "grid");
        read(g, "angular_ck", c.grid.angular_ck, "grid");
        read(g, "kz_guard", c.grid.kz_guard, "grid");
        if (g.contains("rate"))
        {
            auto const& r = g["rate"];
            std::string const w = "grid.rate";
            detail::check_keys(r,
                               {"k_max", "k_count", "cos_count", "phi_count",
                                "omega_count", "omega_max", "tolerance"},
                               w);
            read(r, "k_max", c.grid.rate.k_max, w);
            read(r, "k_count", c.grid.rate.k_count, w);
            read(r, "cos_count", c.grid.rate.cos_count, w);
            read(r, "phi_count", c.grid.rate.phi_count, w);
            read(r, "omega_count", c.grid.rate.omega_count, w);
            read(r, "omega_max", c.grid.rate.omega_max, w);
            read(r, "tolerance", c.grid.rate.tolerance, w);
        }
    }

    if (j.contains("bath"))
    {
        auto const& b = j["bath"];
        detail::check_keys(b, {"eta", "omega_max", "rel_tol", "extrapolate"},
                           "bath");
        read(b, "eta", c.bath.eta, "bath");
        read(b, "omega_max", c.bath.omega_max, "bath");
        read(b, "rel_tol", c.bath.rel_tol, "bath");
        read(b, "extrapolate", c.bath.extrapolate, "bath");
    }

    if (j.contains("output"))
    {
        auto const& o = j["output"];
        detail::check_keys(o, {"path", "format"}, "output");
        read(o, "path", c.output.path, "output");
        std::string fmt = "csv";
        read(o, "format", fmt, "output");
        if (fmt == "csv")
            c.output.format = OutputFormat::csv;
        else if (fmt == "json")
            c.output.format = OutputFormat::json;
        else
            throw ConfigError("output.format: expected 'csv' or 'json'");
    }

    try
    {
        validate(c.material);
        validate(c.scenario);
        validate(c.grid);
        validate(c.bath);
    }
    catch (PreconditionError const& e)
    {
        throw ConfigError(e.what());
    }
    return c;
}

inline RunConfig parse_config_text(std::string const& text)
{
    json j;
    try
    {
        j = json::parse(text);
    }
    catch (json::parse_error const& e)
    {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

inline RunConfig load_config(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

//! Full serialisation; every field is written, so the output is canonical.
inline json to_json(RunConfig const& c)
{
    auto const& g = c.grid;
    return {
        {"material",
         {{"omega0", c.material.omega0},
          {"omega_p", c.material.omega_p},
          {"gamma", c.material.gamma}}},
        {"scenario", detail::scenario_json(c.scenario)},
        {"grid",
         {{"omega", detail::axis_json(g.omega)},
          {"ck", detail::axis_json(g.ck)},
          {"inclination_cos", g.inclination_cos},
          {"bump_azimuth", g.bump_azimuth},
          {"polar_count", g.polar_count},
          {"azimuth_count", g.azimuth_count},
          {"angular_omega", g.angular_omega},
          {"angular_ck", g.angular_ck},
          {"kz_guard", g.kz_guard},
          {"rate",
           {{"k_max", g.rate.k_max},
            {"k_count", g.rate.k_count},
            {"cos_count", g.rate.cos_count},
            {"phi_count", g.rate.phi_count},
            {"omega_count", g.rate.omega_count},
            {"omega_max", g.rate.omega_max},
            {"tolerance", g.rate.tolerance}}}}},
        {"bath",
         {{"eta", c.bath.eta},
          {"omega_max", c.bath.omega_max},
          {"rel_tol", c.bath.rel_tol},
          {"extrapolate", c.bath.extrapolate}}},
        {"output",
         {{"path", c.output.path},
          {"format", c.output.format == OutputFormat::json ? "json" : "csv"}}},
    };
}

/*!
 * 64-bit FNV-1a of the canonical JSON text, as 16 hex digits.
 *
 * The output section is left out so that the same physics hashes the
 * same wherever it is written.
 */
inline std::string config_hash(RunConfig const& c)
{
    json j = to_json(c);
    j.erase("output");
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : j.dump())
    {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace polariton::cli
