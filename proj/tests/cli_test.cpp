#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "boa/harness.hpp"

namespace {

using nlohmann::json;

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

// Directory shared by the pipeline tests; artifacts build on one another.
std::string work_dir() {
    static const std::string dir = [] {
        const std::string d = ::testing::TempDir() + "boa_cli";
        std::filesystem::create_directories(d);
        return d + "/";
    }();
    return dir;
}

CliResult run_cli(const std::string& args) {
    const std::string out_path = work_dir() + "stdout.txt";
    const std::string err_path = work_dir() + "stderr.txt";
    const std::string command =
        std::string(BOA_CLI_PATH) + " " + args + " >" + out_path + " 2>" + err_path;
    const int status = std::system(command.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    return result;
}

std::string env_flags() { return "--task one_room --env-seed 7"; }

// Builds dataset, policy, and index once; later tests reuse the files.
class CliPipeline : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        dataset_path_ = work_dir() + "demos.bin";
        policy_path_ = work_dir() + "policy.bin";
        index_path_ = work_dir() + "index.bin";

        const CliResult record = run_cli("record " + env_flags() +
                                         " --out " + dataset_path_ +
                                         " --episodes 5 --seed 21 --featurizer-seed 11"
                                         " --latent-dim 32");
        ASSERT_EQ(record.exit_code, 0) << record.err;

        const CliResult fit = run_cli("fit-bc --dataset " + dataset_path_ +
                                      " --kind bc_tabular --out " + policy_path_);
        ASSERT_EQ(fit.exit_code, 0) << fit.err;

        const CliResult build =
            run_cli("build-index --dataset " + dataset_path_ + " --out " + index_path_);
        ASSERT_EQ(build.exit_code, 0) << build.err;
    }

    static std::string dataset_path_;
    static std::string policy_path_;
    static std::string index_path_;
};

std::string CliPipeline::dataset_path_;
std::string CliPipeline::policy_path_;
std::string CliPipeline::index_path_;

TEST_F(CliPipeline, RunRerunsByteIdentically) {
    const std::string first = work_dir() + "results_a.csv";
    const std::string second = work_dir() + "results_b.csv";
    const std::string agent_args = "run " + env_flags() +
                                   " --agent boa+bc_tabular --policy " + policy_path_ +
                                   " --index " + index_path_ +
                                   " --k 4 --episodes 3 --runs 2 --seed 5 --out ";

    const CliResult a = run_cli(agent_args + first);
    ASSERT_EQ(a.exit_code, 0) << a.err;
    const CliResult b = run_cli(agent_args + second);
    ASSERT_EQ(b.exit_code, 0) << b.err;
    EXPECT_EQ(slurp(first), slurp(second));
    EXPECT_FALSE(slurp(first).empty());

    std::ifstream in(first, std::ios::binary);
    std::string header;
    ASSERT_TRUE(std::getline(in, header));
    EXPECT_EQ(header, boa::csv_header());

    const std::vector<boa::ResultRow> rows = boa::read_csv(first);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].agent, "boa+bc_tabular");
    EXPECT_EQ(rows[0].env, "one_room");
    EXPECT_EQ(rows[0].k, 4);
    EXPECT_EQ(rows[0].n, 5u);
    EXPECT_EQ(rows[0].episodes, 3);
    EXPECT_EQ(rows[1].run, 1);

    // The one-line summary goes to stdout.
    EXPECT_NE(a.out.find("boa+bc_tabular"), std::string::npos);
    EXPECT_NE(a.out.find("one_room"), std::string::npos);
}

TEST_F(CliPipeline, ZipRunsFromTheIndexAlone) {
    const std::string out = work_dir() + "zip.csv";
    const CliResult r = run_cli("run " + env_flags() + " --agent zip --index " + index_path_ +
                                " --episodes 2 --runs 1 --seed 3 --out " + out);
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const std::vector<boa::ResultRow> rows = boa::read_csv(out);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].agent, "zip");
    EXPECT_EQ(rows[0].k, 1);
    EXPECT_EQ(rows[0].n, 5u);
}

TEST_F(CliPipeline, ExpertNeedsNoArtifacts) {
    const std::string out = work_dir() + "expert.csv";
    const CliResult r = run_cli("run " + env_flags() +
                                " --agent expert --episodes 2 --runs 1 --out " + out);
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const std::vector<boa::ResultRow> rows = boa::read_csv(out);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_DOUBLE_EQ(rows[0].success_rate, 1.0);
}

TEST_F(CliPipeline, DegradeWrapsThePolicy) {
    const std::string out = work_dir() + "degraded.csv";
    const CliResult r = run_cli("run " + env_flags() + " --agent bc_tabular --policy " +
                                policy_path_ +
                                " --degrade 0.5 --episodes 2 --runs 1 --out " + out);
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_EQ(boa::read_csv(out).size(), 1u);
}

TEST_F(CliPipeline, AblateKSweepsAndSummarizes) {
    const std::string out = work_dir() + "ksweep.csv";
    const std::string summary = work_dir() + "ksweep_summary.csv";
    const CliResult r = run_cli("ablate-k " + env_flags() + " --agent boa+bc_tabular --policy " +
                                policy_path_ + " --index " + index_path_ +
                                " --ks 1,3 --episodes 2 --runs 2 --seed 5 --out " + out +
                                " --summary " + summary);
    ASSERT_EQ(r.exit_code, 0) << r.err;

    const std::vector<boa::ResultRow> rows = boa::read_csv(out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0].k, 1);
    EXPECT_EQ(rows[1].k, 1);
    EXPECT_EQ(rows[2].k, 3);
    EXPECT_EQ(rows[3].k, 3);

    const std::string summary_text = slurp(summary);
    EXPECT_EQ(summary_text.substr(0, boa::report_header().size() + 5),
              boa::report_header() + ",best");
    EXPECT_NE(summary_text.find(",1\n"), std::string::npos);
}

TEST_F(CliPipeline, AblateNRebuildsTheIndexPerSize) {
    const std::string out = work_dir() + "nsweep.csv";
    const CliResult r = run_cli("ablate-n " + env_flags() + " --agent zip --dataset " +
                                dataset_path_ +
                                " --ns 1,5 --episodes 2 --runs 1 --seed 5 --out " + out);
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const std::vector<boa::ResultRow> rows = boa::read_csv(out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].n, 1u);
    EXPECT_EQ(rows[1].n, 5u);
}

TEST_F(CliPipeline, ReportAggregatesResultFiles) {
    const std::string results = work_dir() + "results_a.csv";
    ASSERT_TRUE(std::filesystem::exists(results));
    const std::string out = work_dir() + "report.csv";
    const CliResult r = run_cli("report " + results + " " + results + " --out " + out);
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const std::string text = slurp(out);
    EXPECT_EQ(text.substr(0, boa::report_header().size()), boa::report_header());
    // Both runs of both input copies collapse into one aggregate line.
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
    EXPECT_NE(text.find(",4,"), std::string::npos);  // runs column
}

TEST_F(CliPipeline, DiagnosticsStreamIsJsonLines) {
    const std::string out = work_dir() + "diag_run.csv";
    const std::string diag = work_dir() + "diag.jsonl";
    const CliResult r = run_cli("run " + env_flags() + " --agent boa+bc_tabular --policy " +
                                policy_path_ + " --index " + index_path_ +
                                " --k 2 --episodes 1 --runs 1 --out " + out +
                                " --diagnostics " + diag);
    ASSERT_EQ(r.exit_code, 0) << r.err;
    std::ifstream in(diag, std::ios::binary);
    std::string line;
    std::size_t count = 0;
    while (std::getline(in, line)) {
        const json row = json::parse(line);
        EXPECT_TRUE(row.contains("posterior"));
        count += 1;
    }
    EXPECT_GT(count, 0u);
}

TEST(CliErrors, UnknownTaskReportsSpecError) {
    const std::string out = work_dir() + "never.csv";
    const CliResult r =
        run_cli("run --task warehouse --agent expert --episodes 1 --runs 1 --out " + out);
    EXPECT_EQ(r.exit_code, 1);
    const json err = json::parse(r.err);
    EXPECT_EQ(err.at("error"), "spec");
    EXPECT_FALSE(err.at("message").get<std::string>().empty());
}

TEST(CliErrors, MissingArtifactReportsFormatError) {
    const CliResult r = run_cli("fit-bc --dataset " + work_dir() +
                                "nonexistent.bin --out " + work_dir() + "never.bin");
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_EQ(json::parse(r.err).at("error"), "format");
}

TEST(CliErrors, MissingPolicyFlagReportsUsageError) {
    const std::string out = work_dir() + "never.csv";
    const CliResult r = run_cli("run " + env_flags() +
                                " --agent bc_tabular --episodes 1 --runs 1 --out " + out);
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_EQ(json::parse(r.err).at("error"), "usage");
}

TEST(CliErrors, UnknownFlagExitsTwo) {
    const CliResult r = run_cli("run --frobnicate");
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_EQ(json::parse(r.err).at("error"), "cli");
}

TEST(CliErrors, HelpExitsZero) {
    const CliResult r = run_cli("--help");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("record"), std::string::npos);
    EXPECT_NE(r.out.find("ablate-k"), std::string::npos);
}

}  // namespace
