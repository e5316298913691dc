// rotorlab: run the kicked-rotor fidelity experiments and write CSV + metadata.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical-resolution error.

#include "rotorlab/experiment/config.hpp"
#include "rotorlab/experiment/runs.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

struct Overrides {
    std::string config_path;
    std::optional<std::string> out;
    std::optional<int> t_max;
    std::optional<int> n_max;
    std::optional<int> threads;
    std::optional<double> sigma;
};

void add_run_flags(CLI::App& cmd, Overrides& o) {
    cmd.add_option("--config", o.config_path, "key = value configuration file");
    cmd.add_option("--out", o.out, "output directory");
    cmd.add_option("--t-max", o.t_max, "number of kicks (map steps for map-portrait)");
    cmd.add_option("--n-max", o.n_max, "initial momentum cutoff |n| <= N");
    cmd.add_option("--threads", o.threads, "worker threads, 0 = auto (fallback: ROTORLAB_THREADS)");
    cmd.add_option("--sigma", o.sigma, "Gaussian smoothing width in kicks");
}

rotorlab::experiment::RunConfig build_config(rotorlab::experiment::Experiment e, const Overrides& o) {
    using namespace rotorlab::experiment;
    RunConfig c = defaults_for(e);
    if (const char* env = std::getenv("ROTORLAB_THREADS"); env && *env)
        c.threads = detail::parse_int("ROTORLAB_THREADS", env);
    if (!o.config_path.empty()) c = load_config_file(c, o.config_path);
    if (o.out) c.output_path = *o.out;
    if (o.t_max) c.t_max = *o.t_max;
    if (o.n_max) c.n_max = *o.n_max;
    if (o.threads) c.threads = *o.threads;
    if (o.sigma) c.sigma_smooth = *o.sigma;
    validate(c);
    return c;
}

} // namespace

int main(int argc, char** argv) {
    using namespace rotorlab::experiment;

    CLI::App app{"Fidelity of nearly resonant quantum kicked rotors"};
    app.require_subcommand(1);

    Overrides overrides;
    const std::pair<const char*, Experiment> commands[] = {
        {"figure1", Experiment::figure1},
        {"figure2a", Experiment::figure2a},
        {"figure2b", Experiment::figure2b},
        {"exact-resonance", Experiment::exact_resonance},
        {"map-portrait", Experiment::map_portrait},
        {"sweep", Experiment::sweep},
    };
    std::optional<Experiment> chosen;
    for (const auto& [name, e] : commands) {
        auto* cmd = app.add_subcommand(name, std::string("run the ") + name + " experiment");
        add_run_flags(*cmd, overrides);
        cmd->callback([&chosen, e = e] { chosen = e; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : exit_config;
    }

    try {
        const RunConfig config = build_config(*chosen, overrides);
        const RunResult result = run(config);
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
        const auto csv = write_result(result, config.output_path);
        std::cout << "wrote " << csv.string() << '\n';
        return 0;
    } catch (const rotorlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const rotorlab::OutsideIsland& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const rotorlab::UnderResolved& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return exit_numerical;
    } catch (const rotorlab::NonIntegrable& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
