#include "insp/dispatch.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"Inspection scheduling for partially observed degrading facilities"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    long runs = 0;

    auto add_common = [&](CLI::App* sub, bool with_sim_overrides) {
        sub->add_option("--config", config_path, "run configuration file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides [output] dir)");
        if (with_sim_overrides) {
            sub->add_option("--seed", seed, "override the config seed");
            sub->add_option("--runs", runs, "override the number of simulation runs");
        }
    };

    CLI::App* plan = app.add_subcommand("plan", "optimal inspection period and score trace");
    CLI::App* simulate = app.add_subcommand("simulate", "Monte-Carlo rule comparison");
    CLI::App* sensitivity =
        app.add_subcommand("sensitivity", "d ranges per optimal inspection period");
    CLI::App* hitting =
        app.add_subcommand("hitting-time", "expected times to a disruptive event");
    CLI::App* validate = app.add_subcommand("validate", "transition-model diagnostics");
    add_common(plan, false);
    add_common(simulate, true);
    add_common(sensitivity, false);
    add_common(hitting, false);
    add_common(validate, false);

    CLI11_PARSE(app, argc, argv);

    insp::DispatchOptions opts;
    opts.command = app.get_subcommands().front()->get_name();
    opts.config_path = config_path;
    if (!out_dir.empty()) opts.out_dir = out_dir;
    if (simulate->parsed()) {
        if (simulate->count("--seed")) opts.seed = seed;
        if (simulate->count("--runs")) opts.runs = runs;
    }
    return insp::dispatch(opts, std::cout);
}
