#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "boa/adaptation.hpp"
#include "boa/dataset.hpp"
#include "boa/errors.hpp"
#include "boa/featurizer.hpp"
#include "boa/gridworld.hpp"
#include "boa/latent_index.hpp"
#include "boa/policies.hpp"

namespace boa {

enum class AgentKind : std::uint8_t {
    expert,
    random,
    bc_tabular,
    bc_linear,
    zip,
    boa_bc_tabular,
    boa_bc_linear,
};

// Names as used on the CLI and in the agent CSV column, e.g. "boa+bc_tabular".
AgentKind agent_kind_from_name(const std::string& name);
std::string agent_kind_name(AgentKind kind);

bool agent_uses_policy(AgentKind kind);
bool agent_uses_index(AgentKind kind);

// Non-owning wiring of one agent's artifacts. Which pointers must be set
// depends on the kind; evaluate() checks.
struct AgentSetup {
    AgentKind kind = AgentKind::random;
    const Policy* policy = nullptr;
    const LatentIndex* index = nullptr;
    const Featurizer* featurizer = nullptr;
    BoaConfig boa;
    ZipConfig zip;
};

struct RunConfig {
    EnvSpec env;
    int episodes = 30;
    int runs = 3;
    std::uint64_t seed = 0;  // run r draws its agent streams from seed ^ r
    // Report measured query times; off by default so CSV bytes are a pure
    // function of the arguments.
    bool timing = false;
    std::string diagnostics_path;  // per-step JSON lines; empty disables
};

// One CSV row: header
// agent,env,run,episodes,k,n,success_rate,mean_return,mean_length,mean_query_ms,seed
// with floats printed at 6 decimal places.
struct ResultRow {
    std::string agent;
    std::string env;
    int run = 0;
    int episodes = 0;
    int k = 0;           // retrieval width; 0 for agents that do not retrieve
    std::uint64_t n = 0;  // trajectories behind the index; 0 without one
    double success_rate = 0.0;
    double mean_return = 0.0;
    double mean_length = 0.0;
    double mean_query_ms = 0.0;
    std::uint64_t seed = 0;
};

std::string csv_header();
std::string csv_line(const ResultRow& row);
void write_csv(const std::string& path, std::span<const ResultRow> rows);
std::vector<ResultRow> read_csv(const std::string& path);

// R runs of E episodes; one row per run. Episode e of run r plays env seed
// mix(env.seed ^ r, "eval", e) with agent randomness mix(seed ^ r, "act", e),
// so adding runs appends rows without changing existing ones.
std::vector<ResultRow> evaluate(const AgentSetup& setup, const RunConfig& config);

inline constexpr std::array<int, 13> kDefaultKGrid = {1,  5,  10, 15, 20, 30, 40,
                                                      50, 60, 70, 80, 90, 100};

// 1, 5, 10, ... capped at min(dataset_size, 150).
std::vector<std::size_t> default_n_grid(std::size_t dataset_size);

// One evaluate per k (shared seeds), rows concatenated. The setup must be a
// retrieval-adapted agent.
std::vector<ResultRow> ablate_k(const AgentSetup& setup, const RunConfig& config,
                                std::span<const int> ks);

// For each n: truncate the dataset to its first n trajectories, rebuild the
// index, evaluate. The base policy artifact stays fixed.
std::vector<ResultRow> ablate_n(const AgentSetup& setup, const Dataset& dataset,
                                const Featurizer& featurizer, const RunConfig& config,
                                std::span<const std::size_t> ns);

// Mean and population standard deviation per (agent, env, k, n) group,
// sorted by that key.
struct AggregateRow {
    std::string agent;
    std::string env;
    int k = 0;
    std::uint64_t n = 0;
    int runs = 0;
    double success_rate_mean = 0.0, success_rate_std = 0.0;
    double mean_return_mean = 0.0, mean_return_std = 0.0;
    double mean_length_mean = 0.0, mean_length_std = 0.0;
    double mean_query_ms_mean = 0.0, mean_query_ms_std = 0.0;
};

std::vector<AggregateRow> aggregate_rows(std::span<const ResultRow> rows);

std::string report_header();
std::string report_line(const AggregateRow& row);
void write_report_csv(const std::string& path, std::span<const AggregateRow> rows);

// Index of the aggregate with the highest mean success rate; ties prefer
// smaller k, then smaller n.
std::size_t best_aggregate(std::span<const AggregateRow> rows);

// Sweep summaries append a best column (0/1) to the report schema.
void write_sweep_csv(const std::string& path, std::span<const AggregateRow> rows);

}  // namespace boa
