#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <entlight/entlight.hpp>

using namespace entlight;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream buf;
    buf << is.rdbuf();
    return buf.str();
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

} // namespace

TEST_CASE("mixing-fraction sweep matches direct evaluation") {
    ScenarioConfig c = parse_config(R"({
        "scenario": "hopfield_sweep",
        "grids": {
            "k_over_k0": {"min": 0.0, "max": 1.5, "count": 7},
            "delta_values": [-0.5, 0.5]
        }
    })");
    const SweepResult r = run_hopfield_sweep(c);
    REQUIRE(r.columns == std::vector<std::string>{"k_over_k0", "delta", "m11_sq", "m12_sq"});
    REQUIRE(r.rows.size() == 14);

    size_t i = 0;
    for (const double delta : {-0.5, 0.5}) {
        CavityParams p{c.ec0, c.omega_r, c.eb, delta};
        for (int ki = 0; ki < 7; ++ki, ++i) {
            const auto& row = r.rows[i];
            REQUIRE(row.size() == 4);
            CHECK(row[0] == Catch::Approx(1.5 * ki / 6.0).margin(1e-15));
            CHECK(row[1] == delta);
            const HopfieldCoeffs h = hopfield(p, row[0] * p.k0());
            CHECK(row[2] == h.m11 * h.m11);
            CHECK(row[3] == h.m12 * h.m12);
            CHECK(row[2] + row[3] == Catch::Approx(1.0).margin(1e-14));
        }
    }
}

TEST_CASE("asymmetry map hits the balanced point at zero saturation") {
    ScenarioConfig c = parse_config(R"({
        "scenario": "beta_map",
        "grids": {
            "delta": {"min": -1.0, "max": 1.0, "count": 5},
            "p_s": {"min": 0.0, "max": 0.8, "count": 5},
            "kp_over_k0": 0.05
        }
    })");
    const SweepResult r = run_beta_map(c);
    REQUIRE(r.columns == std::vector<std::string>{"delta", "p_s", "beta_sq"});
    REQUIRE(r.rows.size() == 25);

    for (const auto& row : r.rows) {
        REQUIRE(row.size() == 3);
        CHECK(row[2] >= 0.0);
        CHECK(row[2] <= 1.0);
        if (row[1] == 0.0) CHECK(std::abs(row[2] - 0.5) < 1e-15);
    }

    // Spot-check one interior cell against the library calls it wraps.
    const auto& row = r.rows[7]; // delta index 1, p_s index 2
    const CavityParams p{c.ec0, c.omega_r, c.eb, row[0]};
    const WaveVector kp{c.kp_over_k0 * p.k0(), 0.0};
    const WaveVector q = solve_scattering_vector(p, kp);
    const auto [alpha, beta] = pair_amplitudes_with_saturation(p, kp, q, row[1]);
    CHECK(row[2] == beta * beta);
    CHECK(alpha * alpha + beta * beta == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("asymmetry map reproduces the reference operating point") {
    // Single-cell sweep at the detuning and saturation used throughout the
    // cavity-level tests.
    const ScenarioConfig c = parse_config(R"({
        "scenario": "beta_map",
        "grids": {"delta": {"min": 0.0, "count": 1},
                  "p_s": {"min": 0.4, "count": 1},
                  "kp_over_k0": 0.05}
    })");
    const SweepResult r = run_beta_map(c);
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0][0] == 0.0);
    CHECK(r.rows[0][1] == 0.4);
    CHECK(r.rows[0][2] == Catch::Approx(0.18286631828951952).margin(1e-13));
}

TEST_CASE("window sweep with explicit grid certifies the pure state first") {
    ScenarioConfig c = parse_config(R"({
        "scenario": "sn_vs_dt",
        "pumps": {"magnitudes_k0": [0.03, 0.06]},
        "window": {"dt_values": [0.0, 1e9]}
    })");
    const SweepResult r = run_sn_vs_dt(c);
    REQUIRE(r.columns.size() == 8); // 4 fixed + f_1..f_4
    CHECK(r.columns[0] == "dt_over_t0");
    CHECK(r.columns[3] == "certified_sn");
    CHECK(r.columns[4] == "f_1");
    CHECK(r.columns[7] == "f_4");
    REQUIRE(r.rows.size() == 2);

    const auto& pure = r.rows[0];
    CHECK(pure[0] == 0.0);
    CHECK(pure[1] == c.delta);
    CHECK(pure[2] == Catch::Approx(2.0 * c.omega_r / c.eb).margin(1e-15));
    CHECK(pure[3] == 4.0);
    // Subset bounds of the rank-one witness climb to one.
    for (int k = 4; k < 7; ++k) CHECK(pure[k] < pure[k + 1] + 1e-12);
    CHECK(pure[7] == Catch::Approx(1.0).margin(1e-10));

    const auto& late = r.rows[1];
    CHECK(late[0] == 1e9);
    CHECK(late[3] <= 2.0);
    CHECK(late[3] >= 1.0);
}

TEST_CASE("automatic window grid starts at zero and honors the cap") {
    ScenarioConfig c = parse_config(R"({
        "scenario": "sn_vs_dt",
        "pumps": {"magnitudes_k0": [0.03, 0.06]},
        "window": {"dt_count": 12, "dt_max": 50.0}
    })");
    const SweepResult capped = run_sn_vs_dt(c);
    REQUIRE(capped.rows.size() == 12);
    CHECK(capped.rows.front()[0] == 0.0);
    CHECK(capped.rows[1][0] == Catch::Approx(50.0 * 1e-6).epsilon(1e-12));
    CHECK(capped.rows.back()[0] == Catch::Approx(50.0).epsilon(1e-12));
    for (size_t i = 0; i + 1 < capped.rows.size(); ++i)
        CHECK(capped.rows[i][0] < capped.rows[i + 1][0]);

    // Degenerate counts still include the zero-width window.
    c.dt_count = 1;
    CHECK(run_sn_vs_dt(c).rows.size() == 1);
    c.dt_count = 2;
    const SweepResult two = run_sn_vs_dt(c);
    REQUIRE(two.rows.size() == 2);
    CHECK(two.rows[0][0] == 0.0);
    CHECK(two.rows[1][0] == 50.0);

    // Without a cap the grid spans the slowest beat of the state itself.
    c.dt_count = 6;
    c.dt_max = 0.0;
    const SweepResult automatic = run_sn_vs_dt(c);
    REQUIRE(automatic.rows.size() == 6);
    CHECK(automatic.rows.front()[0] == 0.0);
    CHECK(automatic.rows.back()[0] > 0.0);
}

TEST_CASE("runs are deterministic and thread-count invariant") {
    ScenarioConfig c = parse_config(R"({
        "scenario": "hopfield_sweep",
        "grids": {"k_over_k0": {"min": 0.0, "max": 2.0, "count": 40},
                  "delta_values": [-1.0, 0.0, 1.0]}
    })");
    c.threads = 1;
    const SweepResult serial = run_scenario_rows(c);
    const SweepResult again = run_scenario_rows(c);
    c.threads = 4;
    const SweepResult parallel = run_scenario_rows(c);

    REQUIRE(serial.rows.size() == again.rows.size());
    REQUIRE(serial.rows.size() == parallel.rows.size());
    for (size_t i = 0; i < serial.rows.size(); ++i) {
        CHECK(serial.rows[i] == again.rows[i]);
        CHECK(serial.rows[i] == parallel.rows[i]);
    }
}

TEST_CASE("worker exceptions reach the caller") {
    ScenarioConfig c = parse_config(R"({"scenario": "sn_vs_dt"})");
    c.dt_values = {0.0, 1.0};
    c.t_start = std::numeric_limits<double>::quiet_NaN();
    c.threads = 4;
    CHECK_THROWS_AS(run_sn_vs_dt(c), invalid_window);
}

TEST_CASE("csv output carries its own provenance") {
    ScenarioConfig c = parse_config(R"({
        "scenario": "hopfield_sweep",
        "grids": {"k_over_k0": {"min": 0.0, "max": 1.0, "count": 3},
                  "delta_values": [0.0]},
        "output": {"path": "/tmp/somewhere.csv"},
        "threads": 2
    })");
    const SweepResult r = run_hopfield_sweep(c);
    std::ostringstream os;
    write_csv(c, r, os);
    const std::string text = os.str();

    std::istringstream is(text);
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == "# entlight sweep: hopfield_sweep");
    REQUIRE(std::getline(is, line));
    REQUIRE(line.rfind("# config: ", 0) == 0);
    const std::string embedded = line.substr(std::string("# config: ").size());
    CHECK(ojson::parse(embedded) == resolved_json(c));
    REQUIRE(std::getline(is, line));
    CHECK(line == "k_over_k0,delta,m11_sq,m12_sq");
    int data_lines = 0;
    while (std::getline(is, line)) {
        ++data_lines;
        CHECK(std::count(line.begin(), line.end(), ',') == 3);
    }
    CHECK(data_lines == 3);

    // Reparsing the embedded config and rerunning reproduces the file byte
    // for byte, regardless of the original path and thread settings.
    const ScenarioConfig replay = parse_config(embedded);
    std::ostringstream os2;
    write_csv(replay, run_scenario_rows(replay), os2);
    CHECK(os2.str() == text);
}

TEST_CASE("json output embeds config, columns, and rows") {
    ScenarioConfig c = parse_config(R"({
        "scenario": "beta_map",
        "grids": {"delta": {"min": 0.0, "max": 1.0, "count": 2},
                  "p_s": {"min": 0.0, "max": 0.4, "count": 3}},
        "output": {"format": "json"}
    })");
    const SweepResult r = run_beta_map(c);
    std::ostringstream os;
    write_output(c, r, os);

    const ojson doc = ojson::parse(os.str());
    CHECK(doc.at("config") == resolved_json(c));
    CHECK(doc.at("columns").get<std::vector<std::string>>() == r.columns);
    REQUIRE(doc.at("rows").size() == r.rows.size());
    for (size_t i = 0; i < r.rows.size(); ++i)
        CHECK(doc.at("rows")[i].get<std::vector<double>>() == r.rows[i]);
}

TEST_CASE("file output and its failure modes") {
    ScenarioConfig c = parse_config(R"({
        "scenario": "hopfield_sweep",
        "grids": {"k_over_k0": {"min": 0.0, "max": 1.0, "count": 2},
                  "delta_values": [0.0]}
    })");
    CHECK_THROWS_AS(run_scenario(c), io_error);

    const auto path = temp_file("entlight_scenario_test.csv");
    c.output_path = path.string();
    run_scenario(c);
    const std::string text = slurp(path);
    CHECK(text.rfind("# entlight sweep: hopfield_sweep", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);
    std::filesystem::remove(path);

    c.output_path = (std::filesystem::temp_directory_path() / "no_such_dir" / "x.csv").string();
    CHECK_THROWS_AS(run_scenario(c), io_error);
}
