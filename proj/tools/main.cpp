// Command-line front end: record demonstrations, fit cloning policies,
// build retrieval indexes, run evaluations and sweeps, aggregate results.
// Every seed is an explicit flag, so identical invocations produce
// byte-identical artifacts.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "boa/adaptation.hpp"
#include "boa/dataset.hpp"
#include "boa/errors.hpp"
#include "boa/featurizer.hpp"
#include "boa/gridworld.hpp"
#include "boa/harness.hpp"
#include "boa/latent_index.hpp"
#include "boa/policies.hpp"

namespace {

using nlohmann::json;

std::string error_line(const std::string& kind, const std::string& message) {
    json line;
    line["error"] = kind;
    line["message"] = message;
    return line.dump();
}

std::string error_kind(const boa::Error& e) {
    if (dynamic_cast<const boa::DimensionError*>(&e)) return "dimension";
    if (dynamic_cast<const boa::DomainError*>(&e)) return "domain";
    if (dynamic_cast<const boa::FormatError*>(&e)) return "format";
    if (dynamic_cast<const boa::ConsistencyError*>(&e)) return "consistency";
    if (dynamic_cast<const boa::UsageError*>(&e)) return "usage";
    if (dynamic_cast<const boa::SpecError*>(&e)) return "spec";
    if (dynamic_cast<const boa::BuildError*>(&e)) return "build";
    if (dynamic_cast<const boa::QueryError*>(&e)) return "query";
    if (dynamic_cast<const boa::FitError*>(&e)) return "fit";
    if (dynamic_cast<const boa::ExpertError*>(&e)) return "expert";
    if (dynamic_cast<const boa::RecordError*>(&e)) return "record";
    return "error";
}

// Environment flags shared by every subcommand that instantiates a task.
// Zero-valued dimension overrides mean "task default".
struct EnvArgs {
    std::string task = "hallway";
    std::uint64_t env_seed = 0;
    int width = 0;
    int height = 0;
    int max_steps = 0;
    int view_radius = 0;

    boa::EnvSpec spec() const {
        boa::EnvSpec s = boa::EnvSpec::defaults(boa::task_from_name(task), env_seed);
        if (width > 0) s.width = width;
        if (height > 0) s.height = height;
        if (max_steps > 0) s.max_steps = max_steps;
        if (view_radius > 0) s.view_radius = view_radius;
        return s;
    }
};

void add_env_flags(CLI::App* cmd, EnvArgs& args) {
    cmd->add_option("--task", args.task,
                    "Task name: hallway, one_room, four_rooms, t_maze, maze_s3, pick_place")
        ->capture_default_str();
    cmd->add_option("--env-seed", args.env_seed, "Base seed for layouts and entity placement")
        ->capture_default_str();
    cmd->add_option("--width", args.width, "Grid width override (0 = task default)");
    cmd->add_option("--height", args.height, "Grid height override (0 = task default)");
    cmd->add_option("--max-steps", args.max_steps, "Episode horizon override (0 = task default)");
    cmd->add_option("--view-radius", args.view_radius, "View radius override (0 = task default)");
}

struct RecordArgs {
    EnvArgs env;
    std::string out;
    int episodes = 20;
    double tie_noise = 0.25;
    std::uint64_t seed = 0;
    std::uint64_t featurizer_seed = 0;
    int latent_dim = 64;
    bool keep_failures = false;
};

int cmd_record(const RecordArgs& args) {
    boa::RecordConfig config;
    config.env = args.env.spec();
    config.featurizer = boa::FeaturizerSpec::for_window(args.featurizer_seed, args.latent_dim,
                                                        config.env.obs_width());
    config.episodes = args.episodes;
    config.tie_noise = args.tie_noise;
    config.seed = args.seed;
    config.keep_failures = args.keep_failures;

    const boa::Dataset dataset = boa::record_demonstrations(config);
    dataset.save(args.out);
    std::cout << "recorded " << dataset.trajectories.size() << " trajectories ("
              << dataset.total_steps() << " steps) to " << args.out << "\n";
    return 0;
}

struct FitArgs {
    std::string dataset;
    std::string kind = "bc_tabular";
    std::string out;
    double beta = boa::TabularBC::kDefaultBeta;
    double tau = boa::TabularBC::kDefaultTau;
    boa::LinearFitConfig linear;
};

int cmd_fit_bc(const FitArgs& args) {
    const boa::Dataset dataset = boa::Dataset::load(args.dataset);
    const int actions = dataset.env.action_count();
    if (args.kind == "bc_tabular") {
        std::vector<std::uint64_t> hashes;
        std::vector<int> labels;
        boa::collect_hashes_actions(dataset, hashes, labels);
        boa::TabularBC policy(actions, args.beta, args.tau);
        policy.fit(hashes, labels);
        policy.save(args.out);
        std::cout << "fitted bc_tabular on " << labels.size() << " steps ("
                  << policy.table_size() << " distinct observations) to " << args.out << "\n";
    } else if (args.kind == "bc_linear") {
        const boa::Featurizer featurizer(dataset.featurizer);
        std::vector<std::vector<double>> latents;
        std::vector<int> labels;
        boa::collect_latents_actions(dataset, featurizer, latents, labels);
        boa::LinearBC policy(actions, featurizer.spec());
        policy.fit(latents, labels, args.linear);
        policy.save(args.out);
        std::cout << "fitted bc_linear on " << labels.size() << " steps to " << args.out << "\n";
    } else {
        throw boa::UsageError("unknown policy kind: " + args.kind);
    }
    return 0;
}

struct BuildIndexArgs {
    std::string dataset;
    std::string out;
    std::uint64_t trajectories = 0;  // 0 = all
};

int cmd_build_index(const BuildIndexArgs& args) {
    boa::Dataset dataset = boa::Dataset::load(args.dataset);
    if (args.trajectories > 0) {
        dataset = boa::truncate(dataset, static_cast<std::size_t>(args.trajectories));
    }
    const boa::Featurizer featurizer(dataset.featurizer);
    const boa::LatentIndex index = boa::build_index(dataset, featurizer);
    index.save(args.out);
    std::cout << "indexed " << index.size() << " steps from " << index.trajectory_count()
              << " trajectories to " << args.out << "\n";
    return 0;
}

struct AgentArgs {
    std::string agent = "random";
    std::string policy_path;
    std::string index_path;
    double degrade = 0.0;
    boa::BoaConfig boa;
    std::string mode = boa::decision_mode_name(boa::BoaConfig{}.mode);
    boa::ZipConfig zip;
};

void add_agent_flags(CLI::App* cmd, AgentArgs& args) {
    cmd->add_option("--agent", args.agent,
                    "Agent kind: expert, random, bc_tabular, bc_linear, zip, "
                    "boa+bc_tabular, boa+bc_linear")
        ->capture_default_str();
    cmd->add_option("--policy", args.policy_path, "Fitted policy file (bc_* and boa+* agents)");
    cmd->add_option("--index", args.index_path, "Latent index file (zip and boa+* agents)");
    cmd->add_option("--degrade", args.degrade,
                    "Mix the loaded policy with uniform: p' = (1-e)p + e/K")
        ->capture_default_str();
    cmd->add_option("--k", args.boa.k, "Neighbors retrieved per adapted decision")
        ->capture_default_str();
    cmd->add_option("--mode", args.mode,
                    "Adapted decision mode: sample_dirichlet_then_categorical, "
                    "mean_categorical, argmax_mean")
        ->capture_default_str();
    cmd->add_option("--epsilon", args.boa.epsilon, "Concentration floor scale")
        ->capture_default_str();
    cmd->add_option("--horizon", args.zip.horizon, "Actions copied per anchor before re-search")
        ->capture_default_str();
    cmd->add_option("--divergence", args.zip.divergence,
                    "Squared-distance drift threshold that forces re-search")
        ->capture_default_str();
}

// Loaded agent artifacts plus a setup wired to them. The setup holds
// non-owning pointers, so this object must outlive every evaluate call.
struct LoadedAgent {
    std::unique_ptr<boa::Policy> policy;
    std::unique_ptr<boa::LatentIndex> index;
    std::unique_ptr<boa::Featurizer> featurizer;
    boa::AgentSetup setup;
};

LoadedAgent load_agent(const AgentArgs& args, bool need_index) {
    LoadedAgent agent;
    agent.setup.kind = boa::agent_kind_from_name(args.agent);
    agent.setup.boa = args.boa;
    agent.setup.boa.mode = boa::decision_mode_from_name(args.mode);
    agent.setup.zip = args.zip;

    if (boa::agent_uses_policy(agent.setup.kind)) {
        if (args.policy_path.empty()) {
            throw boa::UsageError("agent " + args.agent + " needs --policy");
        }
        agent.policy = boa::load_policy(args.policy_path);
        if (args.degrade > 0.0) {
            agent.policy =
                std::make_unique<boa::DegradedPolicy>(std::move(agent.policy), args.degrade);
        }
        agent.setup.policy = agent.policy.get();
    } else if (args.degrade > 0.0) {
        throw boa::UsageError("--degrade applies to policy-backed agents only");
    }

    if (boa::agent_uses_index(agent.setup.kind) && need_index) {
        if (args.index_path.empty()) {
            throw boa::UsageError("agent " + args.agent + " needs --index");
        }
        agent.index = std::make_unique<boa::LatentIndex>(boa::LatentIndex::load(args.index_path));
        agent.setup.index = agent.index.get();
        agent.featurizer = std::make_unique<boa::Featurizer>(agent.index->featurizer());
    } else {
        // Latent-consuming policies carry their featurizer spec themselves.
        const boa::Policy* base = agent.policy.get();
        if (const auto* degraded = dynamic_cast<const boa::DegradedPolicy*>(base)) {
            base = &degraded->base();
        }
        if (const auto* linear = dynamic_cast<const boa::LinearBC*>(base)) {
            agent.featurizer = std::make_unique<boa::Featurizer>(linear->featurizer());
        }
    }
    agent.setup.featurizer = agent.featurizer.get();
    return agent;
}

struct RunArgs {
    EnvArgs env;
    AgentArgs agent;
    std::string out;
    int episodes = 30;
    int runs = 3;
    std::uint64_t seed = 0;
    bool timing = false;
    std::string diagnostics;
};

void add_run_flags(CLI::App* cmd, RunArgs& args) {
    add_env_flags(cmd, args.env);
    add_agent_flags(cmd, args.agent);
    cmd->add_option("--out", args.out, "Result CSV path")->required();
    cmd->add_option("--episodes", args.episodes, "Episodes per run")->capture_default_str();
    cmd->add_option("--runs", args.runs, "Independent runs")->capture_default_str();
    cmd->add_option("--seed", args.seed, "Master seed for agent randomness")
        ->capture_default_str();
    cmd->add_flag("--timing", args.timing,
                  "Report measured query times (off keeps CSV bytes machine-independent)");
    cmd->add_option("--diagnostics", args.diagnostics, "Per-step JSON-lines stream path");
}

boa::RunConfig run_config(const RunArgs& args) {
    boa::RunConfig config;
    config.env = args.env.spec();
    config.episodes = args.episodes;
    config.runs = args.runs;
    config.seed = args.seed;
    config.timing = args.timing;
    config.diagnostics_path = args.diagnostics;
    return config;
}

void print_aggregates(const std::vector<boa::ResultRow>& rows) {
    for (const boa::AggregateRow& agg : boa::aggregate_rows(rows)) {
        std::printf("%s on %s (k=%d, n=%llu): success %.3f +/- %.3f, return %.3f, length %.1f\n",
                    agg.agent.c_str(), agg.env.c_str(), agg.k,
                    static_cast<unsigned long long>(agg.n), agg.success_rate_mean,
                    agg.success_rate_std, agg.mean_return_mean, agg.mean_length_mean);
    }
}

int cmd_run(const RunArgs& args) {
    const LoadedAgent agent = load_agent(args.agent, true);
    const std::vector<boa::ResultRow> rows = boa::evaluate(agent.setup, run_config(args));
    boa::write_csv(args.out, rows);
    print_aggregates(rows);
    std::cout << "wrote " << rows.size() << " rows to " << args.out << "\n";
    return 0;
}

struct SweepArgs {
    RunArgs run;
    std::string summary;
};

int cmd_ablate_k(const SweepArgs& args, const std::vector<int>& ks) {
    const LoadedAgent agent = load_agent(args.run.agent, true);
    std::vector<int> grid = ks;
    if (grid.empty()) grid.assign(boa::kDefaultKGrid.begin(), boa::kDefaultKGrid.end());
    const std::vector<boa::ResultRow> rows =
        boa::ablate_k(agent.setup, run_config(args.run), grid);
    boa::write_csv(args.run.out, rows);
    if (!args.summary.empty()) {
        boa::write_sweep_csv(args.summary, boa::aggregate_rows(rows));
    }
    std::cout << "wrote " << rows.size() << " rows (" << grid.size() << " k values) to "
              << args.run.out << "\n";
    return 0;
}

int cmd_ablate_n(const SweepArgs& args, const std::string& dataset_path,
                 const std::vector<std::uint64_t>& ns) {
    const boa::Dataset dataset = boa::Dataset::load(dataset_path);
    const boa::Featurizer featurizer(dataset.featurizer);
    LoadedAgent agent = load_agent(args.run.agent, false);
    if (agent.featurizer == nullptr) {
        agent.featurizer = std::make_unique<boa::Featurizer>(featurizer.spec());
        agent.setup.featurizer = agent.featurizer.get();
    }
    std::vector<std::size_t> grid;
    for (std::uint64_t n : ns) grid.push_back(static_cast<std::size_t>(n));
    if (grid.empty()) grid = boa::default_n_grid(dataset.trajectories.size());
    const std::vector<boa::ResultRow> rows =
        boa::ablate_n(agent.setup, dataset, featurizer, run_config(args.run), grid);
    boa::write_csv(args.run.out, rows);
    if (!args.summary.empty()) {
        boa::write_sweep_csv(args.summary, boa::aggregate_rows(rows));
    }
    std::cout << "wrote " << rows.size() << " rows (" << grid.size() << " n values) to "
              << args.run.out << "\n";
    return 0;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& out) {
    std::vector<boa::ResultRow> rows;
    for (const std::string& path : inputs) {
        const std::vector<boa::ResultRow> part = boa::read_csv(path);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    const std::vector<boa::AggregateRow> table = boa::aggregate_rows(rows);
    boa::write_report_csv(out, table);
    std::cout << "aggregated " << rows.size() << " rows into " << table.size()
              << " groups at " << out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian online adaptation of gridworld imitation policies"};
    app.require_subcommand(1);

    RecordArgs record;
    CLI::App* record_cmd =
        app.add_subcommand("record", "Record scripted demonstrations into a dataset file");
    add_env_flags(record_cmd, record.env);
    record_cmd->add_option("--out", record.out, "Dataset output path")->required();
    record_cmd->add_option("--episodes", record.episodes, "Demonstrations to keep")
        ->capture_default_str();
    record_cmd->add_option("--tie-noise", record.tie_noise,
                           "Probability of resampling among equally short actions")
        ->capture_default_str();
    record_cmd->add_option("--seed", record.seed, "Seed for tie-noise draws")
        ->capture_default_str();
    record_cmd->add_option("--featurizer-seed", record.featurizer_seed,
                           "Seed stamped into the dataset's featurizer spec")
        ->capture_default_str();
    record_cmd->add_option("--latent-dim", record.latent_dim, "Latent dimension d")
        ->capture_default_str();
    record_cmd->add_flag("--keep-failures", record.keep_failures,
                         "Keep failed episodes instead of re-rolling them");

    FitArgs fit;
    CLI::App* fit_cmd = app.add_subcommand("fit-bc", "Fit a cloning policy on a dataset");
    fit_cmd->add_option("--dataset", fit.dataset, "Dataset file")->required();
    fit_cmd->add_option("--kind", fit.kind, "bc_tabular or bc_linear")->capture_default_str();
    fit_cmd->add_option("--out", fit.out, "Policy output path")->required();
    fit_cmd->add_option("--beta", fit.beta, "Count smoothing (bc_tabular)")
        ->capture_default_str();
    fit_cmd->add_option("--tau", fit.tau, "Count temperature (bc_tabular)")
        ->capture_default_str();
    fit_cmd->add_option("--learning-rate", fit.linear.learning_rate,
                        "Gradient step size (bc_linear)")
        ->capture_default_str();
    fit_cmd->add_option("--epochs", fit.linear.epochs, "Full-batch epochs (bc_linear)")
        ->capture_default_str();

    BuildIndexArgs build;
    CLI::App* build_cmd =
        app.add_subcommand("build-index", "Featurize a dataset into an exact-search index");
    build_cmd->add_option("--dataset", build.dataset, "Dataset file")->required();
    build_cmd->add_option("--out", build.out, "Index output path")->required();
    build_cmd->add_option("--trajectories", build.trajectories,
                          "Index only the first n trajectories (0 = all)")
        ->capture_default_str();

    RunArgs run;
    CLI::App* run_cmd = app.add_subcommand("run", "Evaluate one agent over R runs of E episodes");
    add_run_flags(run_cmd, run);

    SweepArgs sweep_k;
    std::vector<int> ks;
    CLI::App* ablate_k_cmd =
        app.add_subcommand("ablate-k", "Evaluate an adapted agent across retrieval widths");
    add_run_flags(ablate_k_cmd, sweep_k.run);
    ablate_k_cmd->add_option("--ks", ks, "Comma-separated k values (default grid when omitted)")
        ->delimiter(',');
    ablate_k_cmd->add_option("--summary", sweep_k.summary,
                             "Aggregate CSV with a best-k marker column");

    SweepArgs sweep_n;
    std::string sweep_dataset;
    std::vector<std::uint64_t> ns;
    CLI::App* ablate_n_cmd = app.add_subcommand(
        "ablate-n", "Evaluate a retrieval agent across index trajectory counts");
    add_run_flags(ablate_n_cmd, sweep_n.run);
    ablate_n_cmd->add_option("--dataset", sweep_dataset, "Dataset to truncate and re-index")
        ->required();
    ablate_n_cmd->add_option("--ns", ns, "Comma-separated n values (default grid when omitted)")
        ->delimiter(',');
    ablate_n_cmd->add_option("--summary", sweep_n.summary,
                             "Aggregate CSV with a best-n marker column");

    std::vector<std::string> report_inputs;
    std::string report_out;
    CLI::App* report_cmd =
        app.add_subcommand("report", "Aggregate result CSVs into a mean/std comparison table");
    report_cmd->add_option("inputs", report_inputs, "Result CSV files")->required();
    report_cmd->add_option("--out", report_out, "Aggregate CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << error_line("cli", e.what()) << "\n";
        return 2;
    }

    try {
        if (record_cmd->parsed()) return cmd_record(record);
        if (fit_cmd->parsed()) return cmd_fit_bc(fit);
        if (build_cmd->parsed()) return cmd_build_index(build);
        if (run_cmd->parsed()) return cmd_run(run);
        if (ablate_k_cmd->parsed()) return cmd_ablate_k(sweep_k, ks);
        if (ablate_n_cmd->parsed()) return cmd_ablate_n(sweep_n, sweep_dataset, ns);
        if (report_cmd->parsed()) return cmd_report(report_inputs, report_out);
    } catch (const boa::Error& e) {
        std::cerr << error_line(error_kind(e), e.what()) << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << error_line("internal", e.what()) << "\n";
        return 1;
    }
    return 0;
}
