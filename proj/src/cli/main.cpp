#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "lsim/common.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Trotterized Hubbard Loschmidt-amplitude simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    int jobs = 0;
    bool seed_set = false, out_set = false, jobs_set = false;

    const char* names[] = {"timeseries", "fdos", "sample", "resources", "mitigate"};
    const char* descs[] = {"Loschmidt time series over the filter grid",
                           "filtered density of states over an energy grid",
                           "Metropolis-Hastings microcanonical sampling",
                           "closed-form gate counts and shot overheads",
                           "re-process a timeseries file with rescaling"};
    for (int i = 0; i < 5; ++i) {
        CLI::App* sub = app.add_subcommand(names[i], descs[i]);
        sub->add_option("--config", config_path, "JSON run configuration");
        sub->add_option("--seed", seed, "override the config seed")
            ->each([&](const std::string&) { seed_set = true; });
        sub->add_option("--jobs", jobs, "worker threads (default: hardware)")
            ->each([&](const std::string&) { jobs_set = true; });
        sub->add_option("--out", out_dir, "output directory")
            ->each([&](const std::string&) { out_set = true; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        cli::RunConfig cfg = cli::load_config(config_path);
        if (seed_set) cfg.seed = seed;
        if (out_set) cfg.out_dir = out_dir;
        if (jobs_set) {
            if (jobs < 1) throw lsim::ConfigError("--jobs must be >= 1");
            cfg.jobs = jobs;
        }
        cfg.hash = cli::config_hash(cfg);

        if (app.got_subcommand("timeseries")) return cli::cmd_timeseries(cfg);
        if (app.got_subcommand("fdos")) return cli::cmd_fdos(cfg);
        if (app.got_subcommand("sample")) return cli::cmd_sample(cfg);
        if (app.got_subcommand("resources")) return cli::cmd_resources(cfg);
        if (app.got_subcommand("mitigate")) return cli::cmd_mitigate(cfg);
        std::fprintf(stderr, "no subcommand given\n");
        return 2;
    } catch (const lsim::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const lsim::ContractError& e) {
        std::fprintf(stderr, "contract violation: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
