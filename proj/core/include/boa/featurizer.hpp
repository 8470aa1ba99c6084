#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "boa/errors.hpp"
#include "boa/gridworld.hpp"

namespace boa {

inline constexpr int kFrameStackSize = 4;
inline constexpr int kCellCodeCount = 6;

// Identifies a projection exactly: two featurizers with equal specs produce
// bit-identical latents. Stored alongside datasets and indexes so a query
// latent can be checked against the latents it is compared to.
struct FeaturizerSpec {
    std::uint64_t seed = 0;
    int output_dim = 0;
    int input_dim = 0;

    // input_dim for a (2r+1)-wide egocentric window: four stacked frames,
    // each one cell-code one-hot per cell plus a carried bit.
    static FeaturizerSpec for_window(std::uint64_t seed, int output_dim, int obs_width);

    bool operator==(const FeaturizerSpec&) const = default;
};

// Rolling window of the most recent observations. Shorter histories (episode
// start) are padded by repeating the oldest frame.
class FrameStack {
public:
    void reset() { frames_.clear(); }
    void push(const Observation& obs);
    bool empty() const { return frames_.empty(); }

    // Exactly kFrameStackSize frames, oldest first.
    std::vector<const Observation*> padded() const;

private:
    std::deque<Observation> frames_;
};

// Seeded Gaussian random projection of one-hot observation stacks, output
// L2-normalized. Fully determined by FeaturizerSpec; no learned parameters.
class Featurizer {
public:
    explicit Featurizer(const FeaturizerSpec& spec);

    const FeaturizerSpec& spec() const { return spec_; }
    int output_dim() const { return spec_.output_dim; }
    int obs_width() const { return obs_width_; }

    std::vector<double> encode(const FrameStack& stack) const;

    // Per-step latents for a whole episode of observations, frame-stacked
    // from the episode start.
    std::vector<std::vector<double>> encode_episode(std::span<const Observation> episode) const;

private:
    FeaturizerSpec spec_;
    int obs_width_ = 0;
    int frame_length_ = 0;  // one-hot length of a single frame
    Eigen::MatrixXd projection_;  // output_dim x input_dim
};

}  // namespace boa
