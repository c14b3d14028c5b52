#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace mapdes::cli {

// Exit codes shared by all subcommands, fixed for scripting.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitIoError = 3;
inline constexpr int kExitMissingQTable = 4;

struct TrainArgs {
    std::string config_path;
    std::string out_path; // q-table file; curve and manifest are siblings
    std::optional<long long> episodes;
    std::optional<std::uint64_t> seed;
    std::optional<int> farm_id; // default: the q-learning farm
};

struct SimulateArgs {
    std::string config_path;
    std::string scenario;
    std::string qtable_path; // may be empty when the scenario needs none
    std::string out_dir;
    std::optional<std::uint64_t> seed;
};

struct CompareArgs {
    std::string no_re_dir;
    std::string re_no_p2p_dir;
    std::string re_p2p_dir;
    std::string out_dir;
};

int cmd_train(const TrainArgs& args, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);
int cmd_compare(const CompareArgs& args, std::ostream& out, std::ostream& err);

// --seed flag, then the config file, then MAPDES_SEED, then 42.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag_seed,
                           std::optional<std::uint64_t> config_seed);

} // namespace mapdes::cli
