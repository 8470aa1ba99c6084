#include "boa/dataset.hpp"

#include <json.hpp>

#include "boa/io.hpp"
#include "boa/rng.hpp"

namespace boa {

namespace {
using nlohmann::json;

constexpr char kMagicLine[] = "BOATRJ1\n";
}  // namespace

double Trajectory::total_return() const {
    double total = 0.0;
    for (const StepRecord& s : steps) total += static_cast<double>(s.reward);
    return total;
}

std::size_t Dataset::total_steps() const {
    std::size_t n = 0;
    for (const Trajectory& t : trajectories) n += t.steps.size();
    return n;
}

Dataset record_demonstrations(const RecordConfig& config) {
    if (config.episodes < 1) throw RecordError("episodes must be positive");
    if (config.tie_noise < 0.0 || config.tie_noise > 1.0) {
        throw RecordError("tie_noise must lie in [0, 1]");
    }
    if (config.retry_factor < 1) throw RecordError("retry_factor must be positive");

    Dataset dataset;
    dataset.env = config.env;
    dataset.featurizer = config.featurizer;
    dataset.tie_noise = config.tie_noise;
    dataset.record_seed = config.seed;
    dataset.trajectories.reserve(static_cast<std::size_t>(config.episodes));

    const std::uint64_t attempt_budget = static_cast<std::uint64_t>(config.episodes) *
                                         static_cast<std::uint64_t>(config.retry_factor);
    std::uint64_t attempt = 0;
    while (dataset.trajectories.size() < static_cast<std::size_t>(config.episodes)) {
        if (attempt >= attempt_budget) {
            throw RecordError("retry budget exhausted before " +
                              std::to_string(config.episodes) + " successful episodes");
        }
        EnvSpec spec = config.env;
        spec.seed = config.env.seed + attempt;
        Env env(spec);
        Rng tie_rng(mix_seed(config.seed, attempt));
        attempt += 1;

        Trajectory traj;
        traj.episode_seed = spec.seed;
        traj.fingerprint = spec.fingerprint();

        Observation obs = env.observe();
        while (true) {
            int action = env.expert_action();
            // One uniform draw per step regardless of outcome keeps the
            // stream aligned across layouts.
            if (tie_rng.uniform() < config.tie_noise) {
                const std::vector<int> options = env.expert_optimal_actions();
                action = options[tie_rng.below(options.size())];
            }
            const StepResult result = env.step(action);
            traj.steps.push_back({std::move(obs), action, static_cast<float>(result.reward)});
            if (result.done) {
                traj.success = result.success;
                break;
            }
            obs = result.observation;
        }
        if (!traj.success && !config.keep_failures) continue;
        traj.episode_index = static_cast<std::uint32_t>(dataset.trajectories.size());
        dataset.trajectories.push_back(std::move(traj));
    }
    return dataset;
}

Dataset truncate(const Dataset& dataset, std::size_t m) {
    if (m < 1 || m > dataset.trajectories.size()) {
        throw DomainError("truncation to " + std::to_string(m) + " of " +
                          std::to_string(dataset.trajectories.size()) + " trajectories");
    }
    Dataset out;
    out.env = dataset.env;
    out.featurizer = dataset.featurizer;
    out.tie_noise = dataset.tie_noise;
    out.record_seed = dataset.record_seed;
    out.trajectories.assign(dataset.trajectories.begin(),
                            dataset.trajectories.begin() + static_cast<std::ptrdiff_t>(m));
    return out;
}

void Dataset::save(const std::string& path) const {
    json manifest;
    manifest["version"] = 1;
    manifest["task"] = task_name(env.task);
    manifest["width"] = env.width;
    manifest["height"] = env.height;
    manifest["max_steps"] = env.max_steps;
    manifest["view_radius"] = env.view_radius;
    manifest["actions"] = env.action_count();
    manifest["env_seed"] = env.seed;
    manifest["record_seed"] = record_seed;
    manifest["tie_noise"] = tie_noise;
    manifest["episodes"] = trajectories.size();
    manifest["featurizer"] = {{"seed", featurizer.seed},
                              {"output_dim", featurizer.output_dim},
                              {"input_dim", featurizer.input_dim}};

    const int obs_cells = env.obs_width() * env.obs_width();

    io::Writer w(path);
    w.text(kMagicLine);
    w.text(manifest.dump());
    w.text("\n");
    for (const Trajectory& traj : trajectories) {
        w.u32(traj.episode_index);
        w.u64(traj.episode_seed);
        w.u64(traj.fingerprint);
        w.u8(traj.success ? 1 : 0);
        w.u32(static_cast<std::uint32_t>(traj.steps.size()));
        for (const StepRecord& step : traj.steps) {
            if (step.obs.cells.size() != static_cast<std::size_t>(obs_cells)) {
                throw ConsistencyError("observation size does not match the manifest window");
            }
            w.bytes(step.obs.cells.data(), step.obs.cells.size());
            w.u8(step.obs.carried ? 1 : 0);
            w.u8(static_cast<std::uint8_t>(step.action));
            w.f32(step.reward);
        }
    }
    w.close();
}

Dataset Dataset::load(const std::string& path) {
    io::Reader r(path);
    io::expect_magic(r, kMagicLine);

    json manifest;
    try {
        manifest = json::parse(r.line());
    } catch (const json::exception& e) {
        throw FormatError(std::string("dataset manifest is not valid JSON: ") + e.what());
    }
    if (manifest.at("version") != 1) throw FormatError("unsupported dataset version");

    Dataset dataset;
    dataset.env.task = task_from_name(manifest.at("task").get<std::string>());
    dataset.env.width = manifest.at("width").get<int>();
    dataset.env.height = manifest.at("height").get<int>();
    dataset.env.max_steps = manifest.at("max_steps").get<int>();
    dataset.env.view_radius = manifest.at("view_radius").get<int>();
    dataset.env.seed = manifest.at("env_seed").get<std::uint64_t>();
    dataset.record_seed = manifest.at("record_seed").get<std::uint64_t>();
    dataset.tie_noise = manifest.at("tie_noise").get<double>();
    dataset.featurizer.seed = manifest.at("featurizer").at("seed").get<std::uint64_t>();
    dataset.featurizer.output_dim = manifest.at("featurizer").at("output_dim").get<int>();
    dataset.featurizer.input_dim = manifest.at("featurizer").at("input_dim").get<int>();
    if (manifest.at("actions").get<int>() != dataset.env.action_count()) {
        throw FormatError("manifest action count does not match the task");
    }

    const std::uint64_t expected_fingerprint = dataset.env.fingerprint();
    const int obs_w = dataset.env.obs_width();
    const std::size_t obs_cells = static_cast<std::size_t>(obs_w) * obs_w;
    const int action_count = dataset.env.action_count();
    const auto episodes = manifest.at("episodes").get<std::uint64_t>();

    for (std::uint64_t e = 0; e < episodes; ++e) {
        Trajectory traj;
        traj.episode_index = r.u32();
        traj.episode_seed = r.u64();
        traj.fingerprint = r.u64();
        if (traj.fingerprint != expected_fingerprint) {
            throw FormatError("trajectory fingerprint does not match the manifest env");
        }
        const std::uint8_t success = r.u8();
        if (success > 1) throw FormatError("success flag must be 0 or 1");
        traj.success = success == 1;
        const std::uint32_t length = r.u32();
        if (length == 0) throw FormatError("empty trajectory");
        traj.steps.resize(length);
        for (std::uint32_t t = 0; t < length; ++t) {
            StepRecord& step = traj.steps[t];
            step.obs.width = obs_w;
            step.obs.cells.resize(obs_cells);
            r.bytes(step.obs.cells.data(), obs_cells);
            for (std::uint8_t code : step.obs.cells) {
                if (code >= kCellCodeCount) throw FormatError("cell code out of range");
            }
            const std::uint8_t carried = r.u8();
            if (carried > 1) throw FormatError("carried flag must be 0 or 1");
            step.obs.carried = carried == 1;
            step.action = r.u8();
            if (step.action >= action_count) throw FormatError("action out of range");
            step.reward = r.f32();
        }
        dataset.trajectories.push_back(std::move(traj));
    }
    if (!r.at_eof()) throw FormatError("trailing bytes after dataset payload");
    return dataset;
}

void collect_hashes_actions(const Dataset& dataset, std::vector<std::uint64_t>& hashes,
                            std::vector<int>& actions) {
    hashes.clear();
    actions.clear();
    hashes.reserve(dataset.total_steps());
    actions.reserve(dataset.total_steps());
    for (const Trajectory& traj : dataset.trajectories) {
        for (const StepRecord& step : traj.steps) {
            hashes.push_back(step.obs.hash());
            actions.push_back(step.action);
        }
    }
}

void collect_latents_actions(const Dataset& dataset, const Featurizer& featurizer,
                             std::vector<std::vector<double>>& latents,
                             std::vector<int>& actions) {
    latents.clear();
    actions.clear();
    latents.reserve(dataset.total_steps());
    actions.reserve(dataset.total_steps());
    for (const Trajectory& traj : dataset.trajectories) {
        FrameStack stack;
        for (const StepRecord& step : traj.steps) {
            stack.push(step.obs);
            latents.push_back(featurizer.encode(stack));
            actions.push_back(step.action);
        }
    }
}

LatentIndex build_index(const Dataset& dataset, const Featurizer& featurizer) {
    if (featurizer.obs_width() != dataset.env.obs_width()) {
        throw ConsistencyError("featurizer window does not match the dataset");
    }
    LatentIndex index(featurizer.output_dim(), dataset.env.action_count(), featurizer.spec());
    for (std::size_t ti = 0; ti < dataset.trajectories.size(); ++ti) {
        const Trajectory& traj = dataset.trajectories[ti];
        FrameStack stack;
        for (std::size_t si = 0; si < traj.steps.size(); ++si) {
            const StepRecord& step = traj.steps[si];
            stack.push(step.obs);
            const std::vector<double> z = featurizer.encode(stack);
            EntryMeta meta;
            meta.trajectory = static_cast<std::uint32_t>(ti);
            meta.step = static_cast<std::uint32_t>(si);
            meta.action = static_cast<std::uint32_t>(step.action);
            index.add(std::span<const double>(z), meta);
        }
    }
    return index;
}

}  // namespace boa
