#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"

namespace entlight {

using ojson = nlohmann::ordered_json;

enum class Scenario { hopfield_sweep, beta_map, sn_vs_dt };

inline std::string scenario_name(Scenario s) {
    switch (s) {
        case Scenario::hopfield_sweep: return "hopfield_sweep";
        case Scenario::beta_map: return "beta_map";
        case Scenario::sn_vs_dt: return "sn_vs_dt";
    }
    return "?";
}

// Inclusive linear grid; count == 1 degenerates to the lower endpoint.
struct LinearGrid {
    double lo = 0.0;
    double hi = 1.0;
    int count = 2;

    std::vector<double> values() const {
        std::vector<double> v(count);
        for (int i = 0; i < count; ++i)
            v[i] = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (count - 1);
        return v;
    }
};

// Full parameter set for one sweep run.  Every field except `scenario` has a
// default; scenarios ignore the sections they do not use, but the whole set
// is validated and embedded in the output for reproducibility.
struct ScenarioConfig {
    Scenario scenario = Scenario::sn_vs_dt;

    // cavity
    double ec0 = 1.5;
    double omega_r = 0.002;
    double eb = 0.010;
    double delta = 0.0;

    // pumps
    double pump_dir_x = 1.0;
    double pump_dir_y = 0.0;
    std::vector<double> pump_magnitudes_k0 = {0.025, 0.05, 0.075};

    // propagation media
    double slope_minus = 0.5;
    double slope_plus = 1.0;

    // observation window (sn_vs_dt)
    double t_start = 0.0;
    std::vector<double> dt_values; // explicit grid; empty -> automatic
    int dt_count = 200;
    double dt_max = 0.0; // 0 -> automatic from the slowest beat period

    // witness
    double rank_tolerance = 1e-10;
    double certify_tolerance = 1e-7;
    std::string search = "auto"; // auto | exhaustive | pruned

    // grids
    LinearGrid k_grid{0.0, 3.0, 301};            // hopfield_sweep, in k0 units
    std::vector<double> delta_values = {-1.0, 0.0, 1.0}; // hopfield_sweep
    LinearGrid delta_grid{-2.0, 2.0, 101};       // beta_map
    LinearGrid ps_grid{0.0, 1.0, 101};           // beta_map
    double kp_over_k0 = 0.05;                    // beta_map pump magnitude

    // output
    std::string output_path;
    std::string format = "csv"; // csv | json

    int threads = 0; // 0 -> hardware concurrency
};

namespace detail {

[[noreturn]] inline void bad_field(const std::string& path, const std::string& what) {
    throw config_error("config field '" + path + "': " + what);
}

inline void check_keys(const ojson& obj, const std::string& path,
                       std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok)
            throw config_error("unknown config key '" + (path.empty() ? key : path + "." + key) +
                               "'");
    }
}

inline double get_number(const ojson& obj, const std::string& path, const char* key,
                         double fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number()) bad_field(path + key, "expected a number");
    return v.get<double>();
}

inline int get_int(const ojson& obj, const std::string& path, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) bad_field(path + key, "expected an integer");
    return v.get<int>();
}

inline std::string get_string(const ojson& obj, const std::string& path, const char* key,
                              const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_string()) bad_field(path + key, "expected a string");
    return v.get<std::string>();
}

inline std::vector<double> get_number_list(const ojson& obj, const std::string& path,
                                           const char* key, std::vector<double> fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_array()) bad_field(path + key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) bad_field(path + key, "expected an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

inline LinearGrid get_grid(const ojson& obj, const std::string& path, const char* key,
                           LinearGrid fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    const std::string p = path + key;
    if (!v.is_object()) bad_field(p, "expected an object {min, max, count}");
    check_keys(v, p, {"min", "max", "count"});
    LinearGrid g = fallback;
    g.lo = get_number(v, p + ".", "min", g.lo);
    g.hi = get_number(v, p + ".", "max", g.hi);
    g.count = get_int(v, p + ".", "count", g.count);
    if (!std::isfinite(g.lo) || !std::isfinite(g.hi)) bad_field(p, "endpoints must be finite");
    if (g.count < 1) bad_field(p + ".count", "must be at least 1");
    if (g.count > 1 && !(g.hi > g.lo)) bad_field(p, "max must exceed min when count > 1");
    return g;
}

inline void require_positive(double v, const std::string& path) {
    if (!(v > 0.0) || !std::isfinite(v)) bad_field(path, "must be positive and finite");
}

inline void require_strictly_increasing(const std::vector<double>& v, const std::string& path) {
    if (v.empty()) bad_field(path, "must not be empty");
    for (size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) bad_field(path, "entries must be finite");
        if (i > 0 && !(v[i] > v[i - 1])) bad_field(path, "entries must be strictly increasing");
    }
}

} // namespace detail

// Parse and validate a JSON configuration document.  Unknown keys, type
// mismatches, and constraint violations all raise config_error naming the
// offending field.
inline ScenarioConfig parse_config(const std::string& text) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw config_error("config root must be a JSON object");

    detail::check_keys(j, "", {"scenario", "cavity", "pumps", "media", "window", "witness",
                               "grids", "output", "threads"});

    if (!j.contains("scenario"))
        throw config_error("missing required config field 'scenario' "
                           "(hopfield_sweep | beta_map | sn_vs_dt)");

    ScenarioConfig c;
    const std::string sc = detail::get_string(j, "", "scenario", "");
    if (sc == "hopfield_sweep")
        c.scenario = Scenario::hopfield_sweep;
    else if (sc == "beta_map")
        c.scenario = Scenario::beta_map;
    else if (sc == "sn_vs_dt")
        c.scenario = Scenario::sn_vs_dt;
    else
        detail::bad_field("scenario", "unknown scenario '" + sc + "'");

    if (j.contains("cavity")) {
        const auto& o = j.at("cavity");
        if (!o.is_object()) detail::bad_field("cavity", "expected an object");
        detail::check_keys(o, "cavity", {"ec0", "omega_r", "eb", "delta"});
        c.ec0 = detail::get_number(o, "cavity.", "ec0", c.ec0);
        c.omega_r = detail::get_number(o, "cavity.", "omega_r", c.omega_r);
        c.eb = detail::get_number(o, "cavity.", "eb", c.eb);
        c.delta = detail::get_number(o, "cavity.", "delta", c.delta);
    }
    detail::require_positive(c.ec0, "cavity.ec0");
    detail::require_positive(c.omega_r, "cavity.omega_r");
    detail::require_positive(c.eb, "cavity.eb");
    if (!std::isfinite(c.delta)) detail::bad_field("cavity.delta", "must be finite");

    if (j.contains("pumps")) {
        const auto& o = j.at("pumps");
        if (!o.is_object()) detail::bad_field("pumps", "expected an object");
        detail::check_keys(o, "pumps", {"direction", "magnitudes_k0"});
        if (o.contains("direction")) {
            const auto d = detail::get_number_list(o, "pumps.", "direction", {});
            if (d.size() != 2) detail::bad_field("pumps.direction", "expected two components");
            c.pump_dir_x = d[0];
            c.pump_dir_y = d[1];
        }
        c.pump_magnitudes_k0 =
            detail::get_number_list(o, "pumps.", "magnitudes_k0", c.pump_magnitudes_k0);
    }
    if (!(std::hypot(c.pump_dir_x, c.pump_dir_y) > 0.0))
        detail::bad_field("pumps.direction", "must be a nonzero vector");
    if (c.pump_magnitudes_k0.empty())
        detail::bad_field("pumps.magnitudes_k0", "must not be empty");
    for (size_t i = 0; i < c.pump_magnitudes_k0.size(); ++i) {
        if (!(c.pump_magnitudes_k0[i] > 0.0))
            detail::bad_field("pumps.magnitudes_k0", "entries must be positive");
        for (size_t t = 0; t < i; ++t)
            if (c.pump_magnitudes_k0[i] == c.pump_magnitudes_k0[t])
                detail::bad_field("pumps.magnitudes_k0", "entries must be pairwise distinct");
    }

    if (j.contains("media")) {
        const auto& o = j.at("media");
        if (!o.is_object()) detail::bad_field("media", "expected an object");
        detail::check_keys(o, "media", {"slope_minus", "slope_plus"});
        c.slope_minus = detail::get_number(o, "media.", "slope_minus", c.slope_minus);
        c.slope_plus = detail::get_number(o, "media.", "slope_plus", c.slope_plus);
    }
    detail::require_positive(c.slope_minus, "media.slope_minus");
    detail::require_positive(c.slope_plus, "media.slope_plus");

    if (j.contains("window")) {
        const auto& o = j.at("window");
        if (!o.is_object()) detail::bad_field("window", "expected an object");
        detail::check_keys(o, "window", {"t_start", "dt_values", "dt_count", "dt_max"});
        c.t_start = detail::get_number(o, "window.", "t_start", c.t_start);
        c.dt_values = detail::get_number_list(o, "window.", "dt_values", c.dt_values);
        c.dt_count = detail::get_int(o, "window.", "dt_count", c.dt_count);
        c.dt_max = detail::get_number(o, "window.", "dt_max", c.dt_max);
    }
    if (!std::isfinite(c.t_start)) detail::bad_field("window.t_start", "must be finite");
    if (!c.dt_values.empty()) {
        detail::require_strictly_increasing(c.dt_values, "window.dt_values");
        if (c.dt_values.front() < 0.0)
            detail::bad_field("window.dt_values", "entries must be non-negative");
    }
    if (c.dt_count < 1) detail::bad_field("window.dt_count", "must be at least 1");
    if (c.dt_max < 0.0 || !std::isfinite(c.dt_max))
        detail::bad_field("window.dt_max", "must be non-negative and finite");

    if (j.contains("witness")) {
        const auto& o = j.at("witness");
        if (!o.is_object()) detail::bad_field("witness", "expected an object");
        detail::check_keys(o, "witness", {"rank_tolerance", "certify_tolerance", "search"});
        c.rank_tolerance = detail::get_number(o, "witness.", "rank_tolerance", c.rank_tolerance);
        c.certify_tolerance =
            detail::get_number(o, "witness.", "certify_tolerance", c.certify_tolerance);
        c.search = detail::get_string(o, "witness.", "search", c.search);
    }
    if (!(c.rank_tolerance > 0.0) || !(c.rank_tolerance < 1.0))
        detail::bad_field("witness.rank_tolerance", "must lie in (0, 1)");
    if (!(c.certify_tolerance > 0.0) || !(c.certify_tolerance <= 0.1))
        detail::bad_field("witness.certify_tolerance", "must lie in (0, 0.1]");
    if (c.search != "auto" && c.search != "exhaustive" && c.search != "pruned")
        detail::bad_field("witness.search", "must be auto, exhaustive, or pruned");

    if (j.contains("grids")) {
        const auto& o = j.at("grids");
        if (!o.is_object()) detail::bad_field("grids", "expected an object");
        detail::check_keys(o, "grids",
                           {"k_over_k0", "delta_values", "delta", "p_s", "kp_over_k0"});
        c.k_grid = detail::get_grid(o, "grids.", "k_over_k0", c.k_grid);
        c.delta_values = detail::get_number_list(o, "grids.", "delta_values", c.delta_values);
        c.delta_grid = detail::get_grid(o, "grids.", "delta", c.delta_grid);
        c.ps_grid = detail::get_grid(o, "grids.", "p_s", c.ps_grid);
        c.kp_over_k0 = detail::get_number(o, "grids.", "kp_over_k0", c.kp_over_k0);
    }
    if (c.k_grid.lo < 0.0) detail::bad_field("grids.k_over_k0.min", "must be non-negative");
    detail::require_strictly_increasing(c.delta_values, "grids.delta_values");
    if (c.ps_grid.lo < 0.0) detail::bad_field("grids.p_s.min", "must be non-negative");
    detail::require_positive(c.kp_over_k0, "grids.kp_over_k0");

    if (j.contains("output")) {
        const auto& o = j.at("output");
        if (!o.is_object()) detail::bad_field("output", "expected an object");
        detail::check_keys(o, "output", {"path", "format"});
        c.output_path = detail::get_string(o, "output.", "path", c.output_path);
        c.format = detail::get_string(o, "output.", "format", c.format);
    }
    if (c.format != "csv" && c.format != "json")
        detail::bad_field("output.format", "must be csv or json");

    c.threads = detail::get_int(j, "", "threads", c.threads);
    if (c.threads < 0) detail::bad_field("threads", "must be non-negative");

    return c;
}

// The fully resolved configuration (defaults applied) as a JSON document.
// output.path and threads are execution details, not physics, and are left
// out so reruns reproduce data files byte for byte.
inline ojson resolved_json(const ScenarioConfig& c) {
    ojson j;
    j["scenario"] = scenario_name(c.scenario);
    j["cavity"] = {{"ec0", c.ec0}, {"omega_r", c.omega_r}, {"eb", c.eb}, {"delta", c.delta}};
    j["pumps"] = {{"direction", {c.pump_dir_x, c.pump_dir_y}},
                  {"magnitudes_k0", c.pump_magnitudes_k0}};
    j["media"] = {{"slope_minus", c.slope_minus}, {"slope_plus", c.slope_plus}};
    j["window"] = {{"t_start", c.t_start},
                   {"dt_values", c.dt_values},
                   {"dt_count", c.dt_count},
                   {"dt_max", c.dt_max}};
    j["witness"] = {{"rank_tolerance", c.rank_tolerance},
                    {"certify_tolerance", c.certify_tolerance},
                    {"search", c.search}};
    j["grids"] = {
        {"k_over_k0", {{"min", c.k_grid.lo}, {"max", c.k_grid.hi}, {"count", c.k_grid.count}}},
        {"delta_values", c.delta_values},
        {"delta",
         {{"min", c.delta_grid.lo}, {"max", c.delta_grid.hi}, {"count", c.delta_grid.count}}},
        {"p_s", {{"min", c.ps_grid.lo}, {"max", c.ps_grid.hi}, {"count", c.ps_grid.count}}},
        {"kp_over_k0", c.kp_over_k0}};
    j["output"] = {{"format", c.format}};
    return j;
}

} // namespace entlight
