// optpump: command-line front end. One subcommand per mode; `run` takes the
// mode from the config file.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "optpump/harness/config.hpp"
#include "optpump/harness/scenario.hpp"

namespace {

using optpump::harness::ConfigError;
using optpump::harness::Overrides;

struct Flag {
    const char* name;
    const char* key;
    const char* help;
};

// Every overridable parameter, keyed by the config path it sets.
constexpr Flag kFlags[] = {
    {"--rabi", "atom.rabi", "peak Rabi frequency"},
    {"--gamma-e", "atom.gamma_e", "e -> t decay rate"},
    {"--gamma-t", "atom.gamma_t", "t -> g decay rate"},
    {"--delta", "atom.delta", "laser detuning"},
    {"--drive", "drive.kind", "constant | exp_ramp"},
    {"--rise-time", "drive.rise_time", "exp_ramp rise time"},
    {"--t-start", "drive.t_start", "exp_ramp start time"},
    {"--dt", "numerics.dt", "integration step"},
    {"--t-end", "numerics.t_end", "population propagation horizon"},
    {"--tau", "numerics.tau", "trajectory observation interval"},
    {"--n-half", "numerics.n_half", "frequency grid half-size (0 = auto)"},
    {"--tau-max", "numerics.tau_max", "correlation span (0 = auto)"},
    {"--gamma-t-sequence", "numerics.gamma_t_sequence", "gamma_t limit sequence, comma separated"},
    {"--sweep-param", "sweep.param", "swept parameter"},
    {"--sweep-values", "sweep.values", "swept values, comma separated"},
    {"--sweep-target", "sweep.target", "mode run at every sweep point"},
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("--config", "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optical pumping of a driven three-level atom: populations, spectra, comparisons, sweeps."};
    app.require_subcommand(1);
    app.footer("Configuration keys (section.key = default):\n" + optpump::harness::describe_keys() +
               "\nOPTPUMP_THREADS=N runs sweep points on N threads (default 1).\n"
               "OPTPUMP_ISA=scalar|avx2 forces the kernel variant.\n"
               "Exit codes: 0 ok, 2 invalid configuration, 3 convergence failure, 4 I/O failure.");

    std::string config_path;
    std::optional<std::string> out_dir;
    bool plot = false;
    std::vector<std::optional<std::string>> values(std::size(kFlags));

    struct Sub {
        const char* name;
        const char* mode; // nullptr: from the config file
        const char* help;
    };
    const Sub subs[] = {
        {"populations", "populations", "density-matrix propagation from |g>"},
        {"spectrum-analytic", "spectrum-analytic", "closed-form doublet spectrum"},
        {"spectrum-qrt", "spectrum-qrt", "spectrum from the regression theorem"},
        {"spectrum-trajectory", "spectrum-trajectory", "one-photon trajectory spectrum, constant drive"},
        {"spectrum-transient", "spectrum-transient", "one-photon trajectory spectrum, any drive"},
        {"compare", "compare", "all three spectra and a comparison report"},
        {"sweep", "sweep", "parameter sweep"},
        {"run", nullptr, "mode taken from scenario.mode in the config file"},
    };

    const char* selected_mode = nullptr;
    for (const auto& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("--config,-c", config_path, "sectioned key = value file");
        sub->add_option("--out-dir,-o", out_dir, "output directory (output.dir)");
        sub->add_flag("--plot", plot, "emit SVG plots (output.plot)");
        for (std::size_t i = 0; i < std::size(kFlags); ++i)
            sub->add_option(kFlags[i].name, values[i], std::string(kFlags[i].help) + " (" + kFlags[i].key + ")");
        sub->callback([&selected_mode, m = s.mode] { selected_mode = m; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        Overrides overrides;
        if (selected_mode != nullptr) overrides.emplace_back("scenario.mode", selected_mode);
        for (std::size_t i = 0; i < std::size(kFlags); ++i)
            if (values[i]) overrides.emplace_back(kFlags[i].key, *values[i]);
        if (out_dir) overrides.emplace_back("output.dir", *out_dir);
        if (plot) overrides.emplace_back("output.plot", "true");

        const std::string contents = config_path.empty() ? std::string() : read_file(config_path);
        const auto cfg = optpump::harness::parse_config(contents, overrides);
        const auto result = optpump::harness::compute_scenario(cfg);
        const auto written = optpump::harness::write_artifacts(cfg, result);

        if (result.report) std::cout << result.report->render();
        if (!result.summary.empty()) std::cout << result.summary << "\n";
        for (const auto& p : written) std::cout << "wrote " << p.string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "optpump: " << e.what() << "\n";
        return optpump::harness::exit_code_for(e);
    }
}
