#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fsoris/sweep.hpp"
#include "fsoris/validation.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace {

// FSORIS_THREADS caps the OpenMP team size for sweeps, estimators and the
// validation battery; estimates themselves are scheduling-independent.
void apply_thread_env() {
#if defined(_OPENMP)
    const char* raw = std::getenv("FSORIS_THREADS");
    if (raw == nullptr) return;
    char* end = nullptr;
    const long threads = std::strtol(raw, &end, 10);
    if (end != raw && *end == '\0' && threads > 0)
        omp_set_num_threads(static_cast<int>(threads));
#endif
}

int fail_config(const fsoris::ConfigError& err) {
    std::cerr << "config error:\n";
    for (const std::string& problem : err.diagnostics())
        std::cerr << "  " << problem << "\n";
    return 2;
}

bool is_preset_name(const std::string& name) {
    for (const std::string& preset : fsoris::preset_names())
        if (preset == name) return true;
    return false;
}

std::string load_config_text(const std::string& arg) {
    if (is_preset_name(arg)) return fsoris::preset_config(arg);
    std::ifstream in(arg);
    if (!in)
        throw fsoris::ConfigError(
            {"config: cannot read file '" + arg +
             "' (and it is not a preset name; see 'presets list')"});
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

int run_sweep_command(const std::string& config_arg, const CLI::App& cmd,
                      std::uint64_t seed, std::uint64_t samples,
                      const std::string& mode, const std::string& out,
                      const std::string& format) {
    fsoris::SweepConfig config;
    try {
        config = fsoris::parse_sweep_config(load_config_text(config_arg));
    } catch (const fsoris::ConfigError& err) {
        return fail_config(err);
    }

    for (fsoris::CurveSpec& curve : config.curves) {
        if (cmd.count("--seed")) curve.sim.seed = seed;
        if (cmd.count("--samples")) curve.sim.n_samples = samples;
        if (cmd.count("--mode"))
            curve.sim.mode = mode == "exact" ? fsoris::SampleMode::exact
                                             : fsoris::SampleMode::matched;
    }
    if (cmd.count("--out")) config.output.path = out;
    if (cmd.count("--format"))
        config.output.format = format == "json" ? fsoris::OutputFormat::json
                                                : fsoris::OutputFormat::csv;

    const fsoris::RunReport report = fsoris::run_sweep(config);
    const std::string artifact =
        fsoris::render_report(report, config.output.format);

    if (config.output.path.empty()) {
        std::cout << artifact;
        for (const std::string& verdict : report.verdicts)
            std::cerr << verdict << "\n";
    } else {
        std::ofstream file(config.output.path, std::ios::binary);
        file << artifact;
        if (!file) {
            std::cerr << "error: cannot write '" << config.output.path
                      << "'\n";
            return 1;
        }
        for (const std::string& verdict : report.verdicts)
            std::cout << verdict << "\n";
        std::cout << "wrote " << config.output.path << "\n";
    }
    return report.any_row_failed() ? 1 : 0;
}

int run_validate_command(const std::string& level, std::uint64_t seed,
                         const std::string& out) {
    const fsoris::ValidationLevel parsed_level =
        level == "full" ? fsoris::ValidationLevel::full
                        : fsoris::ValidationLevel::quick;
    const fsoris::ValidationReport report =
        fsoris::run_validation(parsed_level, seed);
    const std::string text = fsoris::format_report(report);
    std::cout << text;
    if (!out.empty()) {
        std::ofstream file(out, std::ios::binary);
        file << text;
        if (!file) {
            std::cerr << "error: cannot write '" << out << "'\n";
            return 1;
        }
    }
    return report.all_passed() ? 0 : 1;
}

int run_presets_list() {
    for (const std::string& name : fsoris::preset_names())
        std::printf("%-6s %s\n", name.c_str(),
                    fsoris::preset_summary(name).c_str());
    return 0;
}

int run_presets_show(const std::string& name) {
    try {
        std::cout << fsoris::preset_config(name);
    } catch (const fsoris::ConfigError& err) {
        return fail_config(err);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    apply_thread_env();

    CLI::App app{
        "performance and secrecy metrics for RIS-assisted FSO links: "
        "closed forms, high-SNR asymptotics and Monte Carlo estimates"};
    app.set_version_flag("--version", fsoris::kToolVersion);
    app.require_subcommand(1);

    std::string config_arg;
    std::uint64_t seed = 42;
    std::uint64_t samples = 1'000'000;
    std::string mode = "matched";
    std::string out;
    std::string format = "csv";

    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "run a parameter sweep from a config file or preset name");
    sweep_cmd->add_option("config", config_arg, "config path or preset name")
        ->required();
    sweep_cmd->add_option("--seed", seed, "override the simulation seed");
    sweep_cmd->add_option("--samples", samples,
                          "override the Monte Carlo sample count");
    sweep_cmd->add_option("--mode", mode, "channel sampling model")
        ->check(CLI::IsMember({"exact", "matched"}));
    sweep_cmd->add_option("--out", out, "artifact path (default from config)");
    sweep_cmd->add_option("--format", format, "artifact format")
        ->check(CLI::IsMember({"csv", "json"}));

    std::string level = "quick";
    CLI::App* validate_cmd = app.add_subcommand(
        "validate", "run the analytic-vs-oracle validation battery");
    validate_cmd->add_option("--level", level, "battery size")
        ->check(CLI::IsMember({"quick", "full"}));
    validate_cmd->add_option("--seed", seed, "seed for the sampled checks");
    validate_cmd->add_option("--out", out, "also write the report here");

    CLI::App* presets_cmd =
        app.add_subcommand("presets", "named sweep configurations");
    presets_cmd->require_subcommand(1);
    CLI::App* list_cmd =
        presets_cmd->add_subcommand("list", "list preset names");
    std::string preset_name;
    CLI::App* show_cmd = presets_cmd->add_subcommand(
        "show", "print a preset config (redirect to a file to edit it)");
    show_cmd->add_option("name", preset_name, "preset name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        if (err.get_exit_code() == 0) return app.exit(err);
        app.exit(err);
        return 2;
    }

    try {
        if (sweep_cmd->parsed())
            return run_sweep_command(config_arg, *sweep_cmd, seed, samples,
                                     mode, out, format);
        if (validate_cmd->parsed()) return run_validate_command(level, seed, out);
        if (list_cmd->parsed()) return run_presets_list();
        if (show_cmd->parsed()) return run_presets_show(preset_name);
    } catch (const fsoris::ConfigError& err) {
        return fail_config(err);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 2;
}
