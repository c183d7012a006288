#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "steklab/lab.hpp"

namespace {

void add_common_options(CLI::App* cmd, std::string& config_path, std::string& out_path,
                        std::string& format, int& quad, int& seed, int& threads) {
    cmd->add_option("--config", config_path, "config file (key = value lines)")
        ->required();
    cmd->add_option("--out", out_path, "output path, '-' for stdout");
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--quad", quad, "Gauss points per direction (overrides config)");
    cmd->add_option("--seed", seed, "reserved for future randomized diagnostics");
    cmd->add_option("--threads", threads, "concurrent epsilon legs");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"thin-plate Steklov eigenvalue laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path = "-";
    std::string format = "csv";
    int quad = 0;
    int seed = 0;
    int threads = 1;

    CLI::App* study = app.add_subcommand(
        "study", "sweep epsilon: 2D eigenvalues against the 1D limit");
    CLI::App* limit = app.add_subcommand("limit", "solve the 1D limit problem only");
    CLI::App* steklov = app.add_subcommand("steklov", "single 2D solve at one epsilon");
    for (CLI::App* cmd : {study, limit, steklov})
        add_common_options(cmd, config_path, out_path, format, quad, seed, threads);

    CLI11_PARSE(app, argc, argv);
    (void)seed;

    try {
        steklab::StudyConfig config = steklab::load_config(config_path);
        if (quad > 0) config.quad = quad;
        steklab::RunMode mode = steklab::RunMode::Study;
        if (limit->parsed()) mode = steklab::RunMode::LimitOnly;
        if (steklov->parsed()) mode = steklab::RunMode::SteklovOnly;
        const steklab::ConvergenceReport report =
            steklab::run_convergence_study(config, mode, threads);
        steklab::write_report(report, format, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
