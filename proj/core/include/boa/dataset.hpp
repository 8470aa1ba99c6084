#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "boa/errors.hpp"
#include "boa/featurizer.hpp"
#include "boa/gridworld.hpp"
#include "boa/latent_index.hpp"

namespace boa {

// One transition: the observation the demonstrator saw, the action it took,
// and the reward the step returned.
struct StepRecord {
    Observation obs;
    int action = 0;
    float reward = 0.0f;
};

struct Trajectory {
    std::uint32_t episode_index = 0;
    std::uint64_t episode_seed = 0;   // env seed; replays the episode exactly
    std::uint64_t fingerprint = 0;    // structural env fingerprint
    bool success = false;
    std::vector<StepRecord> steps;

    double total_return() const;
};

// Recorded demonstrations plus everything needed to replay and encode them:
// the structural environment spec, the intended featurizer, and the seeds
// involved.
struct Dataset {
    EnvSpec env;  // seed field holds the base seed episode seeds derive from
    FeaturizerSpec featurizer;
    double tie_noise = 0.0;
    std::uint64_t record_seed = 0;
    std::vector<Trajectory> trajectories;

    std::size_t total_steps() const;

    void save(const std::string& path) const;
    static Dataset load(const std::string& path);
};

struct RecordConfig {
    EnvSpec env;
    FeaturizerSpec featurizer;  // stamped into the manifest for downstream encode
    int episodes = 0;
    // Probability of resampling uniformly among all shortest-path actions
    // instead of taking the demonstrator's preferred one.
    double tie_noise = 0.25;
    std::uint64_t seed = 0;      // drives tie-noise draws only
    bool keep_failures = false;  // default: re-roll failed episodes
    int retry_factor = 100;      // attempt budget = episodes * retry_factor
};

// Rolls out the scripted demonstrator for config.episodes episodes. Attempt
// i uses env seed base+i; failed episodes are re-rolled on fresh attempts
// unless keep_failures is set.
Dataset record_demonstrations(const RecordConfig& config);

// First m trajectories, original order.
Dataset truncate(const Dataset& dataset, std::size_t m);

// Flattened (observation hash, action) training pairs in file order.
void collect_hashes_actions(const Dataset& dataset, std::vector<std::uint64_t>& hashes,
                            std::vector<int>& actions);

// Flattened (latent, action) training pairs, frame-stacked per trajectory.
void collect_latents_actions(const Dataset& dataset, const Featurizer& featurizer,
                             std::vector<std::vector<double>>& latents, std::vector<int>& actions);

// Featurizes every step of every trajectory into an exact-search index,
// entries in trajectory then step order, frame stacks reset per trajectory.
LatentIndex build_index(const Dataset& dataset, const Featurizer& featurizer);

}  // namespace boa
