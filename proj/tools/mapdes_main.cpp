#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mapdes/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"MAPDES: multi-agent peer-to-peer dairy farm energy trading simulator"};
    app.require_subcommand(1);

    mapdes::cli::TrainArgs train_args;
    long long episodes = -1;
    std::uint64_t seed = 0;
    int farm_id = -1;

    CLI::App* train = app.add_subcommand("train", "train the q-learning agent for one farm");
    train->add_option("--config", train_args.config_path, "community config file")->required();
    train->add_option("--out", train_args.out_path, "output q-table file")->required();
    CLI::Option* train_eps = train->add_option("--episodes", episodes, "training episodes");
    CLI::Option* train_seed = train->add_option("--seed", seed, "seed override");
    CLI::Option* train_farm = train->add_option("--farm", farm_id, "farm id to train");

    mapdes::cli::SimulateArgs sim_args;
    CLI::App* simulate = app.add_subcommand("simulate", "run one scenario over the community");
    simulate->add_option("--config", sim_args.config_path, "community config file")->required();
    simulate->add_option("--scenario", sim_args.scenario,
                         "one of no-re-no-p2p | re-no-p2p | re-p2p")
        ->required();
    simulate->add_option("--qtable", sim_args.qtable_path, "trained q-table file");
    simulate->add_option("--out", sim_args.out_dir, "output directory")->required();
    CLI::Option* sim_seed = simulate->add_option("--seed", seed, "seed override");

    mapdes::cli::CompareArgs cmp_args;
    CLI::App* compare = app.add_subcommand("compare", "build the scenario comparison report");
    compare->add_option("--no-re", cmp_args.no_re_dir, "no-re-no-p2p run directory")->required();
    compare->add_option("--re-no-p2p", cmp_args.re_no_p2p_dir, "re-no-p2p run directory")
        ->required();
    compare->add_option("--re-p2p", cmp_args.re_p2p_dir, "re-p2p run directory")->required();
    compare->add_option("--out", cmp_args.out_dir, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    if (train->parsed()) {
        if (*train_eps) train_args.episodes = episodes;
        if (*train_seed) train_args.seed = seed;
        if (*train_farm) train_args.farm_id = farm_id;
        return mapdes::cli::cmd_train(train_args, std::cout, std::cerr);
    }
    if (simulate->parsed()) {
        if (*sim_seed) sim_args.seed = seed;
        return mapdes::cli::cmd_simulate(sim_args, std::cout, std::cerr);
    }
    return mapdes::cli::cmd_compare(cmp_args, std::cout, std::cerr);
}
