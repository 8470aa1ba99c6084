#include "boa/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "boa/adaptation.hpp"
#include "boa/dataset.hpp"
#include "boa/errors.hpp"
#include "boa/policies.hpp"

namespace boa {
namespace {

using nlohmann::json;

std::string temp_path(const std::string& name) { return ::testing::TempDir() + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

Dataset make_demos(const EnvSpec& env) {
    RecordConfig config;
    config.env = env;
    config.featurizer = FeaturizerSpec::for_window(11, 32, env.obs_width());
    config.episodes = 6;
    config.tie_noise = 0.25;
    config.seed = 21;
    return record_demonstrations(config);
}

// Shared one_room artifacts; recorded once, reused read-only by the tests.
struct Artifacts {
    EnvSpec env;
    Dataset dataset;
    Featurizer featurizer;
    LatentIndex index;
    TabularBC tabular;

    Artifacts()
        : env(EnvSpec::defaults(Task::one_room, 7)),
          dataset(make_demos(env)),
          featurizer(dataset.featurizer),
          index(build_index(dataset, featurizer)),
          tabular(3) {
        std::vector<std::uint64_t> hashes;
        std::vector<int> actions;
        collect_hashes_actions(dataset, hashes, actions);
        tabular.fit(hashes, actions);
    }
};

const Artifacts& artifacts() {
    static const Artifacts a;
    return a;
}

RunConfig small_run(const EnvSpec& env, int episodes = 4, int runs = 2,
                    std::uint64_t seed = 5) {
    RunConfig config;
    config.env = env;
    config.episodes = episodes;
    config.runs = runs;
    config.seed = seed;
    return config;
}

AgentSetup expert_setup() {
    AgentSetup setup;
    setup.kind = AgentKind::expert;
    return setup;
}

AgentSetup tabular_setup(const Artifacts& a) {
    AgentSetup setup;
    setup.kind = AgentKind::bc_tabular;
    setup.policy = &a.tabular;
    return setup;
}

AgentSetup boa_setup(const Artifacts& a, int k) {
    AgentSetup setup;
    setup.kind = AgentKind::boa_bc_tabular;
    setup.policy = &a.tabular;
    setup.index = &a.index;
    setup.featurizer = &a.featurizer;
    setup.boa.k = k;
    return setup;
}

AgentSetup zip_setup(const Artifacts& a) {
    AgentSetup setup;
    setup.kind = AgentKind::zip;
    setup.index = &a.index;
    setup.featurizer = &a.featurizer;
    return setup;
}

std::vector<std::string> lines_of(std::span<const ResultRow> rows) {
    std::vector<std::string> out;
    for (const ResultRow& row : rows) out.push_back(csv_line(row));
    return out;
}

TEST(AgentKinds, NamesRoundTrip) {
    for (AgentKind kind : {AgentKind::expert, AgentKind::random, AgentKind::bc_tabular,
                           AgentKind::bc_linear, AgentKind::zip, AgentKind::boa_bc_tabular,
                           AgentKind::boa_bc_linear}) {
        EXPECT_EQ(agent_kind_from_name(agent_kind_name(kind)), kind);
    }
    EXPECT_THROW(agent_kind_from_name("dagger"), SpecError);
    EXPECT_TRUE(agent_uses_index(AgentKind::zip));
    EXPECT_FALSE(agent_uses_policy(AgentKind::zip));
    EXPECT_TRUE(agent_uses_policy(AgentKind::boa_bc_linear));
    EXPECT_FALSE(agent_uses_index(AgentKind::bc_tabular));
}

TEST(Csv, HeaderIsExact) {
    EXPECT_EQ(csv_header(),
              "agent,env,run,episodes,k,n,success_rate,mean_return,mean_length,"
              "mean_query_ms,seed");
}

TEST(Csv, LinePrintsSixDecimalFloats) {
    ResultRow row;
    row.agent = "zip";
    row.env = "hallway";
    row.run = 2;
    row.episodes = 100;
    row.k = 1;
    row.n = 20;
    row.success_rate = 0.5;
    row.mean_return = 0.123456789;
    row.mean_length = 14.25;
    row.mean_query_ms = 0.0;
    row.seed = 12345;
    EXPECT_EQ(csv_line(row), "zip,hallway,2,100,1,20,0.500000,0.123457,14.250000,0.000000,12345");
}

TEST(Csv, RoundTripPreservesRows) {
    std::vector<ResultRow> rows(2);
    rows[0].agent = "expert";
    rows[0].env = "one_room";
    rows[0].run = 0;
    rows[0].episodes = 30;
    rows[0].success_rate = 1.0;
    rows[0].mean_return = 0.875;
    rows[0].mean_length = 13.0;
    rows[1].agent = "boa+bc_tabular";
    rows[1].env = "maze_s3";
    rows[1].run = 4;
    rows[1].episodes = 100;
    rows[1].k = 15;
    rows[1].n = std::uint64_t{1} << 40;
    rows[1].success_rate = 0.25;
    rows[1].mean_length = 61.5;
    rows[1].seed = (std::uint64_t{1} << 63) + 5;

    const std::string path = temp_path("roundtrip.csv");
    write_csv(path, rows);
    const std::vector<ResultRow> back = read_csv(path);
    ASSERT_EQ(back.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(csv_line(back[i]), csv_line(rows[i]));
        EXPECT_EQ(back[i].n, rows[i].n);
        EXPECT_EQ(back[i].seed, rows[i].seed);
    }
}

TEST(Csv, ReadRejectsMalformedFiles) {
    EXPECT_THROW(read_csv(temp_path("missing.csv")), FormatError);

    const std::string bad_header = temp_path("bad_header.csv");
    std::ofstream(bad_header, std::ios::binary) << "agent,env\nzip,hallway\n";
    EXPECT_THROW(read_csv(bad_header), FormatError);

    const std::string short_row = temp_path("short_row.csv");
    std::ofstream(short_row, std::ios::binary) << csv_header() << "\nzip,hallway,0\n";
    EXPECT_THROW(read_csv(short_row), FormatError);

    const std::string junk_number = temp_path("junk_number.csv");
    std::ofstream(junk_number, std::ios::binary)
        << csv_header() << "\nzip,hallway,0,30,1,20,0.5x,0.0,10.0,0.0,7\n";
    EXPECT_THROW(read_csv(junk_number), FormatError);
}

TEST(Csv, EmptyRowListWritesHeaderOnly) {
    const std::string path = temp_path("empty.csv");
    write_csv(path, {});
    EXPECT_EQ(slurp(path), csv_header() + "\n");
    EXPECT_TRUE(read_csv(path).empty());
}

TEST(Evaluate, ExpertSolvesEveryEpisode) {
    const Artifacts& a = artifacts();
    const RunConfig config = small_run(a.env, 5, 2, 9);
    const std::vector<ResultRow> rows = evaluate(expert_setup(), config);
    ASSERT_EQ(rows.size(), 2u);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        EXPECT_EQ(rows[r].agent, "expert");
        EXPECT_EQ(rows[r].env, "one_room");
        EXPECT_EQ(rows[r].run, static_cast<int>(r));
        EXPECT_EQ(rows[r].episodes, 5);
        EXPECT_EQ(rows[r].k, 0);
        EXPECT_EQ(rows[r].n, 0u);
        EXPECT_DOUBLE_EQ(rows[r].success_rate, 1.0);
        EXPECT_GT(rows[r].mean_return, 0.8);
        EXPECT_LE(rows[r].mean_return, 1.0);
        EXPECT_DOUBLE_EQ(rows[r].mean_query_ms, 0.0);
        EXPECT_EQ(rows[r].seed, 9u);
    }
}

TEST(Evaluate, RandomAgentStaysInRange) {
    const Artifacts& a = artifacts();
    AgentSetup setup;
    setup.kind = AgentKind::random;
    const std::vector<ResultRow> rows = evaluate(setup, small_run(a.env, 3, 1));
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_GE(rows[0].success_rate, 0.0);
    EXPECT_LE(rows[0].success_rate, 1.0);
    EXPECT_GE(rows[0].mean_return, 0.0);
    EXPECT_LE(rows[0].mean_return, 1.0);
    EXPECT_GE(rows[0].mean_length, 1.0);
    EXPECT_LE(rows[0].mean_length, static_cast<double>(a.env.max_steps));
}

TEST(Evaluate, IsDeterministic) {
    const Artifacts& a = artifacts();
    const RunConfig config = small_run(a.env);
    const std::vector<std::string> first = lines_of(evaluate(tabular_setup(a), config));
    const std::vector<std::string> second = lines_of(evaluate(tabular_setup(a), config));
    EXPECT_EQ(first, second);

    const std::vector<std::string> boa_first = lines_of(evaluate(boa_setup(a, 3), config));
    const std::vector<std::string> boa_second = lines_of(evaluate(boa_setup(a, 3), config));
    EXPECT_EQ(boa_first, boa_second);
}

TEST(Evaluate, AddingRunsAppendsRows) {
    const Artifacts& a = artifacts();
    RunConfig config = small_run(a.env, 4, 2);
    const std::vector<std::string> two = lines_of(evaluate(boa_setup(a, 3), config));
    config.runs = 3;
    const std::vector<std::string> three = lines_of(evaluate(boa_setup(a, 3), config));
    ASSERT_EQ(two.size(), 2u);
    ASSERT_EQ(three.size(), 3u);
    EXPECT_EQ(three[0], two[0]);
    EXPECT_EQ(three[1], two[1]);
}

TEST(Evaluate, RetrievalColumnsReflectTheSetup) {
    const Artifacts& a = artifacts();
    const RunConfig config = small_run(a.env, 2, 1);
    const std::uint64_t n = a.index.trajectory_count();
    EXPECT_EQ(n, a.dataset.trajectories.size());

    const std::vector<ResultRow> boa_rows = evaluate(boa_setup(a, 4), config);
    EXPECT_EQ(boa_rows[0].agent, "boa+bc_tabular");
    EXPECT_EQ(boa_rows[0].k, 4);
    EXPECT_EQ(boa_rows[0].n, n);

    const std::vector<ResultRow> zip_rows = evaluate(zip_setup(a), config);
    EXPECT_EQ(zip_rows[0].agent, "zip");
    EXPECT_EQ(zip_rows[0].k, 1);
    EXPECT_EQ(zip_rows[0].n, n);

    const std::vector<ResultRow> bc_rows = evaluate(tabular_setup(a), config);
    EXPECT_EQ(bc_rows[0].k, 0);
    EXPECT_EQ(bc_rows[0].n, 0u);
}

TEST(Evaluate, TimingFlagGatesQueryTimes) {
    const Artifacts& a = artifacts();
    RunConfig config = small_run(a.env, 3, 1);
    const std::vector<ResultRow> silent = evaluate(boa_setup(a, 3), config);
    EXPECT_DOUBLE_EQ(silent[0].mean_query_ms, 0.0);

    config.timing = true;
    const std::vector<ResultRow> timed = evaluate(boa_setup(a, 3), config);
    EXPECT_GT(timed[0].mean_query_ms, 0.0);
    EXPECT_DOUBLE_EQ(timed[0].success_rate, silent[0].success_rate);
    EXPECT_DOUBLE_EQ(timed[0].mean_return, silent[0].mean_return);
    EXPECT_DOUBLE_EQ(timed[0].mean_length, silent[0].mean_length);

    // Agents that never query report zero even when timing is on.
    const std::vector<ResultRow> expert = evaluate(expert_setup(), config);
    EXPECT_DOUBLE_EQ(expert[0].mean_query_ms, 0.0);
}

TEST(Evaluate, ValidatesWiring) {
    const Artifacts& a = artifacts();
    const RunConfig config = small_run(a.env, 2, 1);

    AgentSetup no_policy;
    no_policy.kind = AgentKind::bc_tabular;
    EXPECT_THROW(evaluate(no_policy, config), UsageError);

    AgentSetup no_index;
    no_index.kind = AgentKind::zip;
    no_index.featurizer = &a.featurizer;
    EXPECT_THROW(evaluate(no_index, config), UsageError);

    AgentSetup no_featurizer = boa_setup(a, 3);
    no_featurizer.featurizer = nullptr;
    EXPECT_THROW(evaluate(no_featurizer, config), UsageError);

    RunConfig zero_episodes = config;
    zero_episodes.episodes = 0;
    EXPECT_THROW(evaluate(expert_setup(), zero_episodes), UsageError);
    RunConfig zero_runs = config;
    zero_runs.runs = 0;
    EXPECT_THROW(evaluate(expert_setup(), zero_runs), UsageError);

    const TabularBC six_actions(6);
    AgentSetup mismatched = tabular_setup(a);
    mismatched.policy = &six_actions;
    EXPECT_THROW(evaluate(mismatched, config), ConsistencyError);

    const Featurizer narrow(FeaturizerSpec::for_window(11, 32, 5));
    AgentSetup wrong_window = boa_setup(a, 3);
    wrong_window.featurizer = &narrow;
    EXPECT_THROW(evaluate(wrong_window, config), ConsistencyError);

    const Featurizer reseeded(FeaturizerSpec::for_window(12, 32, a.env.obs_width()));
    AgentSetup wrong_stamp = boa_setup(a, 3);
    wrong_stamp.featurizer = &reseeded;
    EXPECT_THROW(evaluate(wrong_stamp, config), ConsistencyError);
}

TEST(Evaluate, WritesAdaptationDiagnostics) {
    const Artifacts& a = artifacts();
    RunConfig config = small_run(a.env, 2, 1);
    config.diagnostics_path = temp_path("boa_diag.jsonl");
    AgentSetup setup = boa_setup(a, 4);
    const std::vector<ResultRow> rows = evaluate(setup, config);

    std::ifstream in(config.diagnostics_path, std::ios::binary);
    ASSERT_TRUE(in.is_open());
    std::string line;
    std::size_t count = 0;
    std::map<std::pair<int, int>, int> next_t;
    while (std::getline(in, line)) {
        const json row = json::parse(line);
        EXPECT_EQ(row.at("agent"), "boa+bc_tabular");
        const int run = row.at("run");
        const int episode = row.at("episode");
        const std::pair<int, int> key{run, episode};
        EXPECT_EQ(row.at("t"), next_t[key]);
        next_t[key] += 1;

        const std::vector<double> prior = row.at("prior");
        const std::vector<std::uint32_t> counts = row.at("counts");
        const std::vector<double> posterior = row.at("posterior");
        ASSERT_EQ(prior.size(), 3u);
        ASSERT_EQ(counts.size(), 3u);
        ASSERT_EQ(posterior.size(), 3u);
        EXPECT_EQ(row.at("neighbors").size(), 4u);

        const ConcentrationVector recomputed = posterior_concentration(
            ActionDistribution(prior), CountVector(counts), 4, setup.boa.epsilon);
        for (std::size_t i = 0; i < 3; ++i) {
            EXPECT_NEAR(posterior[i], recomputed[i], 1e-12);
        }
        const int action = row.at("action");
        EXPECT_GE(action, 0);
        EXPECT_LT(action, 3);
        count += 1;
    }

    double expected = 0.0;
    for (const ResultRow& row : rows) expected += row.mean_length * row.episodes;
    EXPECT_EQ(count, static_cast<std::size_t>(std::llround(expected)));
}

TEST(Evaluate, WritesCopyDiagnostics) {
    const Artifacts& a = artifacts();
    RunConfig config = small_run(a.env, 2, 1);
    config.diagnostics_path = temp_path("zip_diag.jsonl");
    evaluate(zip_setup(a), config);

    std::ifstream in(config.diagnostics_path, std::ios::binary);
    ASSERT_TRUE(in.is_open());
    std::string line;
    std::size_t count = 0;
    while (std::getline(in, line)) {
        const json row = json::parse(line);
        EXPECT_TRUE(row.contains("anchor_entry"));
        ASSERT_TRUE(row.contains("searched"));
        if (row.at("t") == 0) EXPECT_TRUE(row.at("searched").get<bool>());
        count += 1;
    }
    EXPECT_GT(count, 0u);
}

TEST(Sweeps, DefaultGrids) {
    EXPECT_EQ(kDefaultKGrid.size(), 13u);
    EXPECT_EQ(kDefaultKGrid.front(), 1);
    EXPECT_EQ(kDefaultKGrid.back(), 100);

    const std::vector<std::size_t> full = default_n_grid(150);
    ASSERT_EQ(full.size(), 31u);
    EXPECT_EQ(full[0], 1u);
    EXPECT_EQ(full[1], 5u);
    EXPECT_EQ(full[2], 10u);
    EXPECT_EQ(full.back(), 150u);

    EXPECT_EQ(default_n_grid(7), (std::vector<std::size_t>{1, 5}));
    EXPECT_EQ(default_n_grid(1), (std::vector<std::size_t>{1}));
    EXPECT_EQ(default_n_grid(200).back(), 150u);
    EXPECT_THROW(default_n_grid(0), UsageError);
}

TEST(Sweeps, SingleKMatchesPlainEvaluate) {
    const Artifacts& a = artifacts();
    const RunConfig config = small_run(a.env, 3, 2);
    const int ks[] = {2};
    const std::vector<std::string> swept = lines_of(ablate_k(boa_setup(a, 5), config, ks));
    const std::vector<std::string> direct = lines_of(evaluate(boa_setup(a, 2), config));
    EXPECT_EQ(swept, direct);
}

TEST(Sweeps, KSweepConcatenatesPerK) {
    const Artifacts& a = artifacts();
    const RunConfig config = small_run(a.env, 2, 2);
    const int ks[] = {1, 3};
    const std::vector<ResultRow> rows = ablate_k(boa_setup(a, 5), config, ks);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0].k, 1);
    EXPECT_EQ(rows[1].k, 1);
    EXPECT_EQ(rows[2].k, 3);
    EXPECT_EQ(rows[3].k, 3);
}

TEST(Sweeps, KSweepValidation) {
    const Artifacts& a = artifacts();
    const RunConfig config = small_run(a.env, 2, 1);
    const int ks[] = {1};
    EXPECT_THROW(ablate_k(expert_setup(), config, ks), UsageError);
    EXPECT_THROW(ablate_k(zip_setup(a), config, ks), UsageError);
    EXPECT_THROW(ablate_k(boa_setup(a, 5), config, {}), UsageError);

    AgentSetup no_index = boa_setup(a, 5);
    no_index.index = nullptr;
    EXPECT_THROW(ablate_k(no_index, config, ks), UsageError);

    const int too_big[] = {static_cast<int>(a.index.size()) + 1};
    EXPECT_THROW(ablate_k(boa_setup(a, 5), config, too_big), QueryError);
    const int zero[] = {0};
    EXPECT_THROW(ablate_k(boa_setup(a, 5), config, zero), QueryError);
}

TEST(Sweeps, FullSizeNMatchesPlainEvaluate) {
    const Artifacts& a = artifacts();
    const RunConfig config = small_run(a.env, 3, 2);
    const std::size_t ns[] = {a.dataset.trajectories.size()};
    const std::vector<std::string> swept =
        lines_of(ablate_n(boa_setup(a, 3), a.dataset, a.featurizer, config, ns));
    const std::vector<std::string> direct = lines_of(evaluate(boa_setup(a, 3), config));
    EXPECT_EQ(swept, direct);
}

TEST(Sweeps, NSweepShrinksTheIndex) {
    const Artifacts& a = artifacts();
    const RunConfig config = small_run(a.env, 2, 1);
    const std::size_t ns[] = {1, a.dataset.trajectories.size()};
    const std::vector<ResultRow> rows =
        ablate_n(zip_setup(a), a.dataset, a.featurizer, config, ns);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].n, 1u);
    EXPECT_EQ(rows[1].n, a.dataset.trajectories.size());
}

TEST(Sweeps, NSweepValidation) {
    const Artifacts& a = artifacts();
    const RunConfig config = small_run(a.env, 2, 1);
    const std::size_t ns[] = {1};
    EXPECT_THROW(ablate_n(tabular_setup(a), a.dataset, a.featurizer, config, ns), UsageError);
    EXPECT_THROW(ablate_n(zip_setup(a), a.dataset, a.featurizer, config, {}), UsageError);
    const std::size_t zero[] = {0};
    EXPECT_THROW(ablate_n(zip_setup(a), a.dataset, a.featurizer, config, zero), DomainError);
    const std::size_t over[] = {a.dataset.trajectories.size() + 1};
    EXPECT_THROW(ablate_n(zip_setup(a), a.dataset, a.featurizer, config, over), DomainError);
}

TEST(Aggregate, ComputesMeanAndPopulationStd) {
    std::vector<ResultRow> rows(4);
    for (ResultRow& row : rows) {
        row.agent = "zip";
        row.env = "hallway";
        row.k = 1;
        row.n = 20;
    }
    rows[0].success_rate = 0.2;
    rows[1].success_rate = 0.4;
    rows[2].success_rate = 0.6;
    rows[0].mean_length = 10.0;
    rows[1].mean_length = 20.0;
    rows[2].mean_length = 30.0;
    for (int i = 0; i < 3; ++i) rows[i].mean_return = 1.0;
    rows[3].k = 2;  // second group, one member
    rows[3].success_rate = 0.9;

    const std::vector<AggregateRow> agg = aggregate_rows(rows);
    ASSERT_EQ(agg.size(), 2u);
    EXPECT_EQ(agg[0].k, 1);
    EXPECT_EQ(agg[0].runs, 3);
    EXPECT_NEAR(agg[0].success_rate_mean, 0.4, 1e-12);
    EXPECT_NEAR(agg[0].success_rate_std, std::sqrt(0.08 / 3.0), 1e-9);
    EXPECT_NEAR(agg[0].mean_return_mean, 1.0, 1e-12);
    EXPECT_NEAR(agg[0].mean_return_std, 0.0, 1e-12);
    EXPECT_NEAR(agg[0].mean_length_mean, 20.0, 1e-12);
    EXPECT_NEAR(agg[0].mean_length_std, std::sqrt(200.0 / 3.0), 1e-9);
    EXPECT_EQ(agg[1].k, 2);
    EXPECT_EQ(agg[1].runs, 1);
    EXPECT_NEAR(agg[1].success_rate_mean, 0.9, 1e-12);
    EXPECT_NEAR(agg[1].success_rate_std, 0.0, 1e-12);
}

TEST(Aggregate, BestPrefersSuccessThenSmallKThenSmallN) {
    std::vector<AggregateRow> rows(4);
    rows[0].k = 5;
    rows[0].n = 10;
    rows[0].success_rate_mean = 0.5;
    rows[1].k = 3;
    rows[1].n = 20;
    rows[1].success_rate_mean = 0.5;
    rows[2].k = 3;
    rows[2].n = 5;
    rows[2].success_rate_mean = 0.5;
    rows[3].k = 100;
    rows[3].n = 150;
    rows[3].success_rate_mean = 0.4;
    EXPECT_EQ(best_aggregate(rows), 2u);

    rows[3].success_rate_mean = 0.6;
    EXPECT_EQ(best_aggregate(rows), 3u);

    EXPECT_THROW(best_aggregate({}), UsageError);
}

TEST(Aggregate, ReportFilesCarryTheSchema) {
    std::vector<AggregateRow> rows(2);
    rows[0].agent = "zip";
    rows[0].env = "hallway";
    rows[0].k = 1;
    rows[0].n = 20;
    rows[0].runs = 6;
    rows[0].success_rate_mean = 0.95;
    rows[1] = rows[0];
    rows[1].k = 5;
    rows[1].success_rate_mean = 0.75;

    const std::string report = temp_path("report.csv");
    write_report_csv(report, rows);
    const std::string report_text = slurp(report);
    EXPECT_EQ(report_text.substr(0, report_header().size()), report_header());
    EXPECT_EQ(std::count(report_text.begin(), report_text.end(), '\n'), 3);

    const std::string sweep = temp_path("sweep.csv");
    write_sweep_csv(sweep, rows);
    std::ifstream in(sweep, std::ios::binary);
    std::string line;
    ASSERT_TRUE(std::getline(in, line));
    EXPECT_EQ(line, report_header() + ",best");
    ASSERT_TRUE(std::getline(in, line));
    EXPECT_EQ(line.substr(line.size() - 2), ",1");
    ASSERT_TRUE(std::getline(in, line));
    EXPECT_EQ(line.substr(line.size() - 2), ",0");
}

}  // namespace
}  // namespace boa
