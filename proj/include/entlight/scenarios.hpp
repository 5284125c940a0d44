#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "cavity.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "phase_matching.hpp"
#include "state.hpp"
#include "witness.hpp"

namespace entlight {

// Tabular sweep output: column names plus numeric rows, row order fixed by
// the scenario definition regardless of thread count.
struct SweepResult {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

namespace detail {

inline int effective_threads(int requested, int items) {
    int t = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    if (t < 1) t = 1;
    return std::max(1, std::min(t, items));
}

// Run fn(i) for i in [0, items) on a small pool.  Each item writes only its
// own output slot, so results are independent of scheduling; the first
// exception wins and is rethrown on the caller thread.
template <typename Fn>
inline void parallel_for(int items, int threads, Fn&& fn) {
    const int nt = effective_threads(threads, items);
    if (nt <= 1) {
        for (int i = 0; i < items; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t) {
        pool.emplace_back([&] {
            while (true) {
                const int i = next.fetch_add(1);
                if (i >= items) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

inline CavityParams cavity_at(const ScenarioConfig& c, double delta) {
    CavityParams p;
    p.ec0 = c.ec0;
    p.omega_r = c.omega_r;
    p.eb = c.eb;
    p.delta = delta;
    p.validate();
    return p;
}

inline SubsetSearch search_mode(const ScenarioConfig& c) {
    if (c.search == "exhaustive") return SubsetSearch::exhaustive;
    if (c.search == "pruned") return SubsetSearch::pruned;
    return SubsetSearch::automatic;
}

} // namespace detail

// Mixing fractions along |k| for each requested detuning.
inline SweepResult run_hopfield_sweep(const ScenarioConfig& c) {
    const std::vector<double> ks = c.k_grid.values();
    const int nk = static_cast<int>(ks.size());
    const int nd = static_cast<int>(c.delta_values.size());

    SweepResult out;
    out.columns = {"k_over_k0", "delta", "m11_sq", "m12_sq"};
    out.rows.resize(static_cast<size_t>(nd) * nk);

    std::vector<CavityParams> params;
    params.reserve(nd);
    for (const double d : c.delta_values) params.push_back(detail::cavity_at(c, d));

    detail::parallel_for(nd * nk, c.threads, [&](int i) {
        const int di = i / nk;
        const int ki = i % nk;
        const CavityParams& p = params[di];
        const HopfieldCoeffs h = hopfield(p, ks[ki] * p.k0());
        out.rows[i] = {ks[ki], c.delta_values[di], h.m11 * h.m11, h.m12 * h.m12};
    });
    return out;
}

// Pair-amplitude asymmetry over the (detuning, saturation) plane.  The
// saturation axis turns the anharmonic knob at fixed cavity coupling; at
// p_s = 0 the two potentials coincide and beta^2 = 1/2 exactly.
inline SweepResult run_beta_map(const ScenarioConfig& c) {
    const std::vector<double> deltas = c.delta_grid.values();
    const std::vector<double> ps = c.ps_grid.values();
    const int nd = static_cast<int>(deltas.size());
    const int np = static_cast<int>(ps.size());

    SweepResult out;
    out.columns = {"delta", "p_s", "beta_sq"};
    out.rows.resize(static_cast<size_t>(nd) * np);

    const double inv = 1.0 / std::hypot(c.pump_dir_x, c.pump_dir_y);

    detail::parallel_for(nd * np, c.threads, [&](int i) {
        const int di = i / np;
        const int pi = i % np;
        const CavityParams p = detail::cavity_at(c, deltas[di]);
        const double kp_mod = c.kp_over_k0 * p.k0();
        const WaveVector kp{kp_mod * c.pump_dir_x * inv, kp_mod * c.pump_dir_y * inv};
        const WaveVector q = solve_scattering_vector(p, kp);
        const auto [alpha, beta] = pair_amplitudes_with_saturation(p, kp, q, ps[pi]);
        (void)alpha;
        out.rows[i] = {deltas[di], ps[pi], beta * beta};
    });
    return out;
}

// Certified Schmidt number versus observation-window width.
inline SweepResult run_sn_vs_dt(const ScenarioConfig& c) {
    const CavityParams p = detail::cavity_at(c, c.delta);
    PumpSpec pumps;
    pumps.dir_x = c.pump_dir_x;
    pumps.dir_y = c.pump_dir_y;
    pumps.magnitudes_k0 = c.pump_magnitudes_k0;
    const BipartiteState state = bipartite_state(build_pairs(p, pumps));
    const PropagationMedia media{{c.slope_minus}, {c.slope_plus}};

    std::vector<double> dts = c.dt_values;
    if (dts.empty()) {
        // Automatic grid: 0 plus a log spacing up to the point where the
        // slowest channel beat has completed 20 full periods.
        double dt_max = c.dt_max;
        if (dt_max <= 0.0) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (int m = 0; m < state.dim(); ++m) {
                const double e = total_channel_energy(state, m, media);
                lo = std::min(lo, e);
                hi = std::max(hi, e);
            }
            const double spread = hi - lo;
            dt_max = spread > 0.0 ? 40.0 * pi / spread : 1.0;
        }
        dts.push_back(0.0);
        const int n = c.dt_count - 1;
        const double floor = dt_max * 1e-6;
        for (int i = 0; i < n; ++i)
            dts.push_back(n == 1 ? dt_max
                                 : floor * std::pow(dt_max / floor,
                                                    static_cast<double>(i) / (n - 1)));
    }

    const int dim = state.dim();
    SweepResult out;
    out.columns = {"dt_over_t0", "delta", "p_s", "certified_sn"};
    for (int r = 1; r <= dim; ++r) out.columns.push_back("f_" + std::to_string(r));
    out.rows.resize(dts.size());

    const SubsetSearch mode = detail::search_mode(c);
    detail::parallel_for(static_cast<int>(dts.size()), c.threads, [&](int i) {
        const DephasedState rho =
            dephased_density(state, media, c.t_start, c.t_start + dts[i]);
        const SNCertificate cert =
            certify_sn(rho, c.certify_tolerance, c.rank_tolerance, mode);
        std::vector<double>& row = out.rows[i];
        row = {dts[i], c.delta, p.saturation_ratio(), static_cast<double>(cert.certified_sn)};
        row.insert(row.end(), cert.f_values.begin(), cert.f_values.end());
    });
    return out;
}

inline SweepResult run_scenario_rows(const ScenarioConfig& c) {
    switch (c.scenario) {
        case Scenario::hopfield_sweep: return run_hopfield_sweep(c);
        case Scenario::beta_map: return run_beta_map(c);
        case Scenario::sn_vs_dt: return run_sn_vs_dt(c);
    }
    throw invalid_params("unknown scenario");
}

namespace detail {

inline std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace detail

// CSV with `#` provenance header: scenario name and the resolved config as
// one JSON line, so any output file can be reproduced from itself.
inline void write_csv(const ScenarioConfig& c, const SweepResult& r, std::ostream& os) {
    os << "# entlight sweep: " << scenario_name(c.scenario) << "\n";
    os << "# config: " << resolved_json(c).dump() << "\n";
    for (size_t i = 0; i < r.columns.size(); ++i)
        os << (i ? "," : "") << r.columns[i];
    os << "\n";
    for (const auto& row : r.rows) {
        for (size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << detail::format_value(row[i]);
        os << "\n";
    }
}

inline void write_json(const ScenarioConfig& c, const SweepResult& r, std::ostream& os) {
    ojson out;
    out["config"] = resolved_json(c);
    out["columns"] = r.columns;
    out["rows"] = r.rows;
    os << out.dump(2) << "\n";
}

inline void write_output(const ScenarioConfig& c, const SweepResult& r, std::ostream& os) {
    if (c.format == "json")
        write_json(c, r, os);
    else
        write_csv(c, r, os);
}

// Run the configured scenario and write its table to output.path.
inline void run_scenario(const ScenarioConfig& c) {
    if (c.output_path.empty())
        throw io_error("no output path configured (set output.path or pass --out)");
    const SweepResult r = run_scenario_rows(c);
    std::ofstream os(c.output_path);
    if (!os) throw io_error("cannot open output file '" + c.output_path + "'");
    write_output(c, r, os);
    os.flush();
    if (!os) throw io_error("failed writing output file '" + c.output_path + "'");
}

} // namespace entlight
