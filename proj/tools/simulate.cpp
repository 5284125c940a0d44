// Command-line driver for the sweep scenarios.
//
//   simulate <scenario> --config cfg.json [--out file] [--format csv|json]
//            [--threads N]
//
// Exit codes: 0 success, 2 configuration/usage error, 3 model error during
// the run (no phase matching, capacity, ...), 4 output I/O failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <entlight/entlight.hpp>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_model = 3;
constexpr int exit_io = 4;

int threads_from_env() {
    const char* env = std::getenv("SIM_THREADS");
    if (!env || !*env) return 0;
    try {
        const int v = std::stoi(env);
        if (v > 0) return v;
    } catch (...) {
    }
    std::cerr << "warning: ignoring invalid SIM_THREADS value '" << env << "'\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entangled-pair sweep simulator"};

    std::string scenario;
    std::string config_path;
    std::string out_path;
    std::string format;
    int threads_flag = -1;

    app.add_option("scenario", scenario, "Scenario to run")
        ->required()
        ->check(CLI::IsMember({"hopfield_sweep", "beta_map", "sn_vs_dt"}));
    app.add_option("--config", config_path, "JSON configuration file")->required();
    app.add_option("--out", out_path, "Output file (overrides output.path)");
    app.add_option("--format", format, "Output format (overrides output.format)")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", threads_flag, "Worker threads (overrides SIM_THREADS and config)")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    std::string text;
    {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "error: cannot read config file '" << config_path << "'\n";
            return exit_config;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }

    entlight::ScenarioConfig cfg;
    try {
        entlight::ojson doc = entlight::ojson::parse(text);
        if (!doc.is_object()) throw entlight::config_error("config root must be a JSON object");
        if (doc.contains("scenario") && doc.at("scenario").is_string() &&
            doc.at("scenario").get<std::string>() != scenario) {
            std::cerr << "error: config file requests scenario '"
                      << doc.at("scenario").get<std::string>() << "' but the command line says '"
                      << scenario << "'\n";
            return exit_config;
        }
        doc["scenario"] = scenario;
        cfg = entlight::parse_config(doc.dump());
    } catch (const entlight::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: config is not valid JSON: " << e.what() << "\n";
        return exit_config;
    }

    if (!out_path.empty()) cfg.output_path = out_path;
    if (!format.empty()) cfg.format = format;
    if (threads_flag > 0)
        cfg.threads = threads_flag;
    else if (const int env = threads_from_env(); env > 0)
        cfg.threads = env;

    try {
        entlight::run_scenario(cfg);
    } catch (const entlight::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const entlight::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_io;
    } catch (const entlight::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_model;
    }

    std::cout << "wrote " << cfg.output_path << "\n";
    return exit_ok;
}
