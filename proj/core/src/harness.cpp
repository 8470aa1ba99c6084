#include "boa/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <tuple>

#include <json.hpp>

#include "boa/rng.hpp"

namespace boa {

namespace {

using nlohmann::json;

constexpr std::uint64_t kEvalSalt = 0x6576616cULL;  // "eval"
constexpr std::uint64_t kActSalt = 0x616374ULL;     // "act"

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw FormatError("trailing characters in " + what + ": " + s);
        return v;
    } catch (const FormatError&) {
        throw;
    } catch (const std::exception&) {
        throw FormatError("cannot parse " + what + ": " + s);
    }
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(s, &used);
        if (used != s.size()) throw FormatError("trailing characters in " + what + ": " + s);
        return v;
    } catch (const FormatError&) {
        throw;
    } catch (const std::exception&) {
        throw FormatError("cannot parse " + what + ": " + s);
    }
}

int parse_int(const std::string& s, const std::string& what) {
    const std::uint64_t v = parse_u64(s, what);
    if (v > 1000000000ULL) throw FormatError(what + " out of range: " + s);
    return static_cast<int>(v);
}

void validate_setup(const AgentSetup& setup, const RunConfig& config) {
    if (config.episodes < 1) throw UsageError("episodes must be at least 1");
    if (config.runs < 1) throw UsageError("runs must be at least 1");

    const bool wants_policy = agent_uses_policy(setup.kind);
    const bool wants_index = agent_uses_index(setup.kind);
    if (wants_policy && setup.policy == nullptr) {
        throw UsageError(agent_kind_name(setup.kind) + " needs a policy artifact");
    }
    if (wants_index && setup.index == nullptr) {
        throw UsageError(agent_kind_name(setup.kind) + " needs an index artifact");
    }
    const bool needs_latent =
        wants_index || (setup.policy != nullptr && setup.policy->needs_latent());
    if (needs_latent && setup.featurizer == nullptr) {
        throw UsageError(agent_kind_name(setup.kind) + " needs a featurizer");
    }

    const int env_actions = config.env.action_count();
    if (setup.policy != nullptr && wants_policy &&
        setup.policy->action_count() != env_actions) {
        throw ConsistencyError("policy action count does not match the task");
    }
    if (setup.index != nullptr && wants_index && setup.index->action_count() != env_actions) {
        throw ConsistencyError("index action count does not match the task");
    }
    if (setup.featurizer != nullptr && needs_latent &&
        setup.featurizer->obs_width() != config.env.obs_width()) {
        throw ConsistencyError("featurizer window does not match the task observation");
    }
    if (wants_index && setup.featurizer != nullptr &&
        !(setup.index->featurizer() == setup.featurizer->spec())) {
        throw ConsistencyError("index was encoded with a different featurizer");
    }
}

json neighbor_json(const LatentIndex& index, const Neighbor& n) {
    const EntryMeta& m = index.meta(n.entry);
    return json{{"entry", n.entry},
                {"trajectory", m.trajectory},
                {"step", m.step},
                {"action", m.action},
                {"distance_sq", n.distance_sq}};
}

}  // namespace

AgentKind agent_kind_from_name(const std::string& name) {
    if (name == "expert") return AgentKind::expert;
    if (name == "random") return AgentKind::random;
    if (name == "bc_tabular") return AgentKind::bc_tabular;
    if (name == "bc_linear") return AgentKind::bc_linear;
    if (name == "zip") return AgentKind::zip;
    if (name == "boa+bc_tabular") return AgentKind::boa_bc_tabular;
    if (name == "boa+bc_linear") return AgentKind::boa_bc_linear;
    throw SpecError("unknown agent kind: " + name);
}

std::string agent_kind_name(AgentKind kind) {
    switch (kind) {
        case AgentKind::expert: return "expert";
        case AgentKind::random: return "random";
        case AgentKind::bc_tabular: return "bc_tabular";
        case AgentKind::bc_linear: return "bc_linear";
        case AgentKind::zip: return "zip";
        case AgentKind::boa_bc_tabular: return "boa+bc_tabular";
        case AgentKind::boa_bc_linear: return "boa+bc_linear";
    }
    throw SpecError("invalid agent kind enum");
}

bool agent_uses_policy(AgentKind kind) {
    return kind == AgentKind::bc_tabular || kind == AgentKind::bc_linear ||
           kind == AgentKind::boa_bc_tabular || kind == AgentKind::boa_bc_linear;
}

bool agent_uses_index(AgentKind kind) {
    return kind == AgentKind::zip || kind == AgentKind::boa_bc_tabular ||
           kind == AgentKind::boa_bc_linear;
}

std::string csv_header() {
    return "agent,env,run,episodes,k,n,success_rate,mean_return,mean_length,mean_query_ms,seed";
}

std::string csv_line(const ResultRow& row) {
    std::string line;
    line += row.agent;
    line += ',';
    line += row.env;
    line += ',';
    line += std::to_string(row.run);
    line += ',';
    line += std::to_string(row.episodes);
    line += ',';
    line += std::to_string(row.k);
    line += ',';
    line += std::to_string(row.n);
    line += ',';
    line += fixed6(row.success_rate);
    line += ',';
    line += fixed6(row.mean_return);
    line += ',';
    line += fixed6(row.mean_length);
    line += ',';
    line += fixed6(row.mean_query_ms);
    line += ',';
    line += std::to_string(row.seed);
    return line;
}

void write_csv(const std::string& path, std::span<const ResultRow> rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open for writing: " + path);
    out << csv_header() << '\n';
    for (const ResultRow& row : rows) out << csv_line(row) << '\n';
    out.close();
    if (!out) throw FormatError("write failed: " + path);
}

std::vector<ResultRow> read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty CSV: " + path);
    if (line != csv_header()) throw FormatError("unexpected CSV header in " + path);

    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> f = split_fields(line);
        if (f.size() != 11) {
            throw FormatError("expected 11 fields, got " + std::to_string(f.size()) + " in " +
                              path);
        }
        ResultRow row;
        row.agent = f[0];
        row.env = f[1];
        row.run = parse_int(f[2], "run");
        row.episodes = parse_int(f[3], "episodes");
        row.k = parse_int(f[4], "k");
        row.n = parse_u64(f[5], "n");
        row.success_rate = parse_double(f[6], "success_rate");
        row.mean_return = parse_double(f[7], "mean_return");
        row.mean_length = parse_double(f[8], "mean_length");
        row.mean_query_ms = parse_double(f[9], "mean_query_ms");
        row.seed = parse_u64(f[10], "seed");
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ResultRow> evaluate(const AgentSetup& setup, const RunConfig& config) {
    validate_setup(setup, config);

    std::optional<BoaPolicy> boa;
    std::optional<ZipPolicy> zip;
    if (setup.kind == AgentKind::boa_bc_tabular || setup.kind == AgentKind::boa_bc_linear) {
        boa.emplace(*setup.policy, *setup.index, setup.boa);
    } else if (setup.kind == AgentKind::zip) {
        zip.emplace(*setup.index, setup.zip);
    }
    const bool needs_latent =
        agent_uses_index(setup.kind) ||
        (agent_uses_policy(setup.kind) && setup.policy->needs_latent());

    std::ofstream diag;
    if (!config.diagnostics_path.empty()) {
        diag.open(config.diagnostics_path, std::ios::binary);
        if (!diag) throw FormatError("cannot open for writing: " + config.diagnostics_path);
    }

    const std::string agent = agent_kind_name(setup.kind);
    const std::string env_name = task_name(config.env.task);
    int k_column = 0;
    if (boa) k_column = setup.boa.k;
    if (zip) k_column = 1;
    const std::uint64_t n_column = setup.index != nullptr && agent_uses_index(setup.kind)
                                       ? setup.index->trajectory_count()
                                       : 0;

    std::vector<ResultRow> rows;
    rows.reserve(static_cast<std::size_t>(config.runs));
    for (int r = 0; r < config.runs; ++r) {
        int successes = 0;
        double return_sum = 0.0;
        double length_sum = 0.0;
        double query_ms_sum = 0.0;
        std::uint64_t query_count = 0;

        for (int e = 0; e < config.episodes; ++e) {
            EnvSpec espec = config.env;
            espec.seed = mix_seed(mix_seed(config.env.seed ^ static_cast<std::uint64_t>(r),
                                           kEvalSalt),
                                  static_cast<std::uint64_t>(e));
            Env env(espec);
            Rng rng(mix_seed(mix_seed(config.seed ^ static_cast<std::uint64_t>(r), kActSalt),
                             static_cast<std::uint64_t>(e)));
            if (zip) zip->reset();

            FrameStack stack;
            Observation obs = env.observe();
            double total_return = 0.0;
            int length = 0;
            std::vector<double> latent;

            while (true) {
                if (needs_latent) {
                    stack.push(obs);
                    latent = setup.featurizer->encode(stack);
                }
                const PolicyInput in{&obs, latent};

                int action = 0;
                json extra;
                switch (setup.kind) {
                    case AgentKind::expert:
                        action = env.expert_action();
                        break;
                    case AgentKind::random:
                        action = static_cast<int>(sample_categorical(
                            ActionDistribution::uniform(
                                static_cast<std::size_t>(config.env.action_count())),
                            rng));
                        break;
                    case AgentKind::bc_tabular:
                    case AgentKind::bc_linear:
                        action = static_cast<int>(
                            sample_categorical(setup.policy->distribution(in), rng));
                        break;
                    case AgentKind::zip: {
                        const ZipDecision d = zip->decide(latent);
                        action = d.action;
                        if (d.searched) {
                            query_ms_sum += d.query_ms;
                            query_count += 1;
                        }
                        if (diag.is_open()) {
                            extra["anchor_entry"] = d.anchor_entry;
                            extra["searched"] = d.searched;
                        }
                        break;
                    }
                    case AgentKind::boa_bc_tabular:
                    case AgentKind::boa_bc_linear: {
                        const StepDiagnostics d = boa->decide(in, rng);
                        action = d.action;
                        query_ms_sum += d.query_ms;
                        query_count += 1;
                        if (diag.is_open()) {
                            extra["prior"] = d.prior.probs();
                            extra["counts"] = d.counts.counts();
                            extra["posterior"] = d.posterior.alpha();
                            json neighbors = json::array();
                            for (const Neighbor& nb : d.neighbors) {
                                neighbors.push_back(neighbor_json(*setup.index, nb));
                            }
                            extra["neighbors"] = std::move(neighbors);
                            if (config.timing) extra["query_ms"] = d.query_ms;
                        }
                        break;
                    }
                }

                const StepResult result = env.step(action);
                total_return += result.reward;
                length += 1;

                if (diag.is_open()) {
                    json row;
                    row["agent"] = agent;
                    row["run"] = r;
                    row["episode"] = e;
                    row["t"] = length - 1;
                    row["action"] = action;
                    for (auto& [key, value] : extra.items()) row[key] = std::move(value);
                    diag << row.dump() << '\n';
                }

                if (result.done) {
                    if (result.success) successes += 1;
                    break;
                }
                obs = result.observation;
            }

            return_sum += total_return;
            length_sum += static_cast<double>(length);
        }

        ResultRow row;
        row.agent = agent;
        row.env = env_name;
        row.run = r;
        row.episodes = config.episodes;
        row.k = k_column;
        row.n = n_column;
        row.success_rate = static_cast<double>(successes) / config.episodes;
        row.mean_return = return_sum / config.episodes;
        row.mean_length = length_sum / config.episodes;
        row.mean_query_ms =
            config.timing && query_count > 0 ? query_ms_sum / static_cast<double>(query_count)
                                             : 0.0;
        row.seed = config.seed;
        rows.push_back(std::move(row));
    }

    if (diag.is_open()) {
        diag.close();
        if (!diag) throw FormatError("write failed: " + config.diagnostics_path);
    }
    return rows;
}

std::vector<std::size_t> default_n_grid(std::size_t dataset_size) {
    if (dataset_size < 1) throw UsageError("dataset is empty");
    std::vector<std::size_t> grid = {1};
    const std::size_t cap = std::min<std::size_t>(dataset_size, 150);
    for (std::size_t n = 5; n <= cap; n += 5) grid.push_back(n);
    return grid;
}

std::vector<ResultRow> ablate_k(const AgentSetup& setup, const RunConfig& config,
                                std::span<const int> ks) {
    if (setup.kind != AgentKind::boa_bc_tabular && setup.kind != AgentKind::boa_bc_linear) {
        throw UsageError("the k sweep applies to adapted agents only");
    }
    if (ks.empty()) throw UsageError("k list is empty");
    if (setup.index == nullptr) throw UsageError("the k sweep needs an index artifact");
    for (int k : ks) {
        if (k < 1 || static_cast<std::size_t>(k) > setup.index->size()) {
            throw QueryError("k = " + std::to_string(k) + " outside [1, " +
                             std::to_string(setup.index->size()) + "]");
        }
    }

    std::vector<ResultRow> rows;
    for (int k : ks) {
        AgentSetup sweep = setup;
        sweep.boa.k = k;
        const std::vector<ResultRow> part = evaluate(sweep, config);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    return rows;
}

std::vector<ResultRow> ablate_n(const AgentSetup& setup, const Dataset& dataset,
                                const Featurizer& featurizer, const RunConfig& config,
                                std::span<const std::size_t> ns) {
    if (!agent_uses_index(setup.kind)) {
        throw UsageError("the n sweep applies to retrieval agents only");
    }
    if (ns.empty()) throw UsageError("n list is empty");
    for (std::size_t n : ns) {
        if (n < 1 || n > dataset.trajectories.size()) {
            throw DomainError("n = " + std::to_string(n) + " outside [1, " +
                              std::to_string(dataset.trajectories.size()) + "]");
        }
    }

    std::vector<ResultRow> rows;
    for (std::size_t n : ns) {
        const Dataset part = truncate(dataset, n);
        const LatentIndex index = build_index(part, featurizer);
        AgentSetup sweep = setup;
        sweep.index = &index;
        const std::vector<ResultRow> result = evaluate(sweep, config);
        rows.insert(rows.end(), result.begin(), result.end());
    }
    return rows;
}

std::vector<AggregateRow> aggregate_rows(std::span<const ResultRow> rows) {
    using Key = std::tuple<std::string, std::string, int, std::uint64_t>;
    struct Acc {
        int count = 0;
        double sr = 0, sr2 = 0;
        double mr = 0, mr2 = 0;
        double ml = 0, ml2 = 0;
        double mq = 0, mq2 = 0;
    };
    std::map<Key, Acc> groups;
    for (const ResultRow& row : rows) {
        Acc& acc = groups[{row.agent, row.env, row.k, row.n}];
        acc.count += 1;
        acc.sr += row.success_rate;
        acc.sr2 += row.success_rate * row.success_rate;
        acc.mr += row.mean_return;
        acc.mr2 += row.mean_return * row.mean_return;
        acc.ml += row.mean_length;
        acc.ml2 += row.mean_length * row.mean_length;
        acc.mq += row.mean_query_ms;
        acc.mq2 += row.mean_query_ms * row.mean_query_ms;
    }

    auto pop_std = [](double sum, double sum_sq, int count) {
        const double mean = sum / count;
        return std::sqrt(std::max(0.0, sum_sq / count - mean * mean));
    };

    std::vector<AggregateRow> out;
    out.reserve(groups.size());
    for (const auto& [key, acc] : groups) {
        AggregateRow agg;
        agg.agent = std::get<0>(key);
        agg.env = std::get<1>(key);
        agg.k = std::get<2>(key);
        agg.n = std::get<3>(key);
        agg.runs = acc.count;
        agg.success_rate_mean = acc.sr / acc.count;
        agg.success_rate_std = pop_std(acc.sr, acc.sr2, acc.count);
        agg.mean_return_mean = acc.mr / acc.count;
        agg.mean_return_std = pop_std(acc.mr, acc.mr2, acc.count);
        agg.mean_length_mean = acc.ml / acc.count;
        agg.mean_length_std = pop_std(acc.ml, acc.ml2, acc.count);
        agg.mean_query_ms_mean = acc.mq / acc.count;
        agg.mean_query_ms_std = pop_std(acc.mq, acc.mq2, acc.count);
        out.push_back(std::move(agg));
    }
    return out;
}

std::string report_header() {
    return "agent,env,k,n,runs,success_rate_mean,success_rate_std,mean_return_mean,"
           "mean_return_std,mean_length_mean,mean_length_std,mean_query_ms_mean,"
           "mean_query_ms_std";
}

std::string report_line(const AggregateRow& row) {
    std::string line;
    line += row.agent;
    line += ',';
    line += row.env;
    line += ',';
    line += std::to_string(row.k);
    line += ',';
    line += std::to_string(row.n);
    line += ',';
    line += std::to_string(row.runs);
    line += ',';
    line += fixed6(row.success_rate_mean);
    line += ',';
    line += fixed6(row.success_rate_std);
    line += ',';
    line += fixed6(row.mean_return_mean);
    line += ',';
    line += fixed6(row.mean_return_std);
    line += ',';
    line += fixed6(row.mean_length_mean);
    line += ',';
    line += fixed6(row.mean_length_std);
    line += ',';
    line += fixed6(row.mean_query_ms_mean);
    line += ',';
    line += fixed6(row.mean_query_ms_std);
    return line;
}

void write_report_csv(const std::string& path, std::span<const AggregateRow> rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open for writing: " + path);
    out << report_header() << '\n';
    for (const AggregateRow& row : rows) out << report_line(row) << '\n';
    out.close();
    if (!out) throw FormatError("write failed: " + path);
}

std::size_t best_aggregate(std::span<const AggregateRow> rows) {
    if (rows.empty()) throw UsageError("no aggregates to choose from");
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const AggregateRow& a = rows[i];
        const AggregateRow& b = rows[best];
        const bool better = a.success_rate_mean > b.success_rate_mean ||
                            (a.success_rate_mean == b.success_rate_mean &&
                             (a.k < b.k || (a.k == b.k && a.n < b.n)));
        if (better) best = i;
    }
    return best;
}

void write_sweep_csv(const std::string& path, std::span<const AggregateRow> rows) {
    const std::size_t best = best_aggregate(rows);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open for writing: " + path);
    out << report_header() << ",best\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out << report_line(rows[i]) << ',' << (i == best ? '1' : '0') << '\n';
    }
    out.close();
    if (!out) throw FormatError("write failed: " + path);
}

}  // namespace boa
