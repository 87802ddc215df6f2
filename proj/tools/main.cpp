// fieldroad: spreading speeds, thresholds and decay rates for
// reaction-diffusion fields coupled to a line with nonlocal dispersal,
// plus direct simulation of the coupled systems.

#include <CLI11.hpp>

#include <iostream>

#include "fieldroad/config.hpp"

using namespace fieldroad;

int main(int argc, char** argv) {
    CLI::App app{
        "Field-road reaction-diffusion toolkit: dispersion-relation solvers "
        "and a finite-difference simulator for a half-plane coupled to a "
        "line with nonlocal jumps or transport."};
    app.require_subcommand(1);

    std::string config_path;
    CliOptions opt;
    std::vector<std::string> overrides;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "configuration file")->required();
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--set", overrides,
                        "key=value config override (repeatable)");
        sub->add_flag("--check", opt.check,
                      "turn predicted-vs-measured comparisons into pass/fail");
        sub->add_option("--jobs", opt.jobs, "sweep worker threads")
            ->check(CLI::PositiveNumber);
        return sub;
    };

    auto* sp = add_common(app.add_subcommand(
        "speed", "spreading speed, regime and tangency point"));
    auto* ds = add_common(app.add_subcommand(
        "dstar", "enhancement threshold of the line intensity"));
    auto* dc = add_common(app.add_subcommand(
        "decay", "steady tail decay rates of the epidemic system"));
    auto* tr = add_common(app.add_subcommand(
        "transport", "spreading speeds under line transport and kappa_star"));
    auto* rd = add_common(app.add_subcommand(
        "reduced", "reduced asymptotic factors w_star / omega_sirt"));
    auto* sim = add_common(app.add_subcommand(
        "simulate", "run the simulator and compare against predictions"));
    auto* sw = add_common(app.add_subcommand(
        "sweep", "cartesian parameter sweep (<= 2 axes)"));

    CLI11_PARSE(app, argc, argv);

    try {
        Config cfg = Config::parse_file(config_path);
        for (const std::string& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw ConfigError("--set expects key=value, got '" + kv + "'");
            cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (sw->parsed()) return cmd_sweep(cfg, opt, std::cout);
        const RunConfig rc = RunConfig::load(cfg);
        if (sp->parsed()) return cmd_speed(rc, opt, std::cout);
        if (ds->parsed()) return cmd_dstar(rc, opt, std::cout);
        if (dc->parsed()) return cmd_decay(rc, opt, std::cout);
        if (tr->parsed()) return cmd_transport(rc, opt, std::cout);
        if (rd->parsed()) return cmd_reduced(rc, opt, std::cout);
        if (sim->parsed()) return cmd_simulate(rc, opt, std::cout);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const InsufficientData& e) {
        std::cerr << "analysis failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const CflViolation& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const NonFinite& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical;
    }
    return exit_ok;
}
