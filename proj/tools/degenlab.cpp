#include "degenlab/config.hpp"
#include "degenlab/runner.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <omp.h>

int main(int argc, char** argv) {
    using namespace degenlab;
    CLI::App app{"degenlab: numerical experiments on degenerate dispersive flows"};
    app.require_subcommand(1);

    std::string config, suite, out;
    int jobs = 0;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", out, "output directory (overrides DEGENLAB_OUT and the config)");
        sub->add_option("--jobs", jobs, "OpenMP worker count")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "root seed override");
    };
    std::vector<CLI::App*> subs;
    for (const auto& cmd : experiment_commands()) {
        auto* sub = app.add_subcommand(cmd, "run a '" + cmd + "' experiment");
        sub->add_option("--config", config, "experiment config (JSON)")->required();
        add_common(sub);
        subs.push_back(sub);
    }
    auto* va = app.add_subcommand("verify-all", "run every entry of a suite and aggregate criteria");
    va->add_option("--suite", suite, "suite file (JSON)")->required();
    add_common(va);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << error_json("usage", e.what()) << "\n";
        return kExitValidation;
    }

    RunOptions opt;
    if (!out.empty()) opt.out = out;
    if (jobs > 0) {
        opt.jobs = jobs;
        omp_set_num_threads(jobs);
    }
    for (auto* sub : app.get_subcommands()) {
        if (sub == va) {
            if (sub->count("--seed")) opt.seed = seed;
            return verify_all(suite, opt, std::cout, std::cerr);
        }
        if (sub->count("--seed")) opt.seed = seed;
        opt.expected_command = sub->get_name();
        return run(config, opt, std::cout, std::cerr);
    }
    return kExitInternal;
}
