#include "boa/featurizer.hpp"

#include <cmath>

#include "boa/rng.hpp"

namespace boa {

FeaturizerSpec FeaturizerSpec::for_window(std::uint64_t seed, int output_dim, int obs_width) {
    if (obs_width < 1 || obs_width % 2 == 0) throw SpecError("obs_width must be odd and positive");
    FeaturizerSpec s;
    s.seed = seed;
    s.output_dim = output_dim;
    s.input_dim = kFrameStackSize * (obs_width * obs_width * kCellCodeCount + 1);
    return s;
}

void FrameStack::push(const Observation& obs) {
    frames_.push_back(obs);
    while (frames_.size() > static_cast<std::size_t>(kFrameStackSize)) frames_.pop_front();
}

std::vector<const Observation*> FrameStack::padded() const {
    if (frames_.empty()) throw UsageError("encode on an empty frame stack");
    std::vector<const Observation*> out;
    out.reserve(kFrameStackSize);
    const int missing = kFrameStackSize - static_cast<int>(frames_.size());
    for (int i = 0; i < missing; ++i) out.push_back(&frames_.front());
    for (const Observation& obs : frames_) out.push_back(&obs);
    return out;
}

Featurizer::Featurizer(const FeaturizerSpec& spec) : spec_(spec) {
    if (spec_.output_dim < 1) throw SpecError("output_dim must be positive");
    if (spec_.input_dim < 1 || spec_.input_dim % kFrameStackSize != 0) {
        throw SpecError("input_dim must be a positive multiple of the frame stack size");
    }
    frame_length_ = spec_.input_dim / kFrameStackSize;
    const int cells = (frame_length_ - 1) / kCellCodeCount;
    if ((frame_length_ - 1) % kCellCodeCount != 0) {
        throw SpecError("frame length does not decompose into cell one-hots plus a carried bit");
    }
    obs_width_ = static_cast<int>(std::lround(std::sqrt(static_cast<double>(cells))));
    if (obs_width_ * obs_width_ != cells) {
        throw SpecError("frame length does not correspond to a square window");
    }

    // Entries are drawn column by column so the draw order is part of the
    // spec contract.
    projection_.resize(spec_.output_dim, spec_.input_dim);
    Rng rng(mix_seed(spec_.seed, 0x70726f6aULL));  // "proj"
    for (int col = 0; col < spec_.input_dim; ++col) {
        for (int row = 0; row < spec_.output_dim; ++row) {
            projection_(row, col) = rng.normal();
        }
    }
}

std::vector<double> Featurizer::encode(const FrameStack& stack) const {
    const std::vector<const Observation*> frames = stack.padded();
    const int cells = obs_width_ * obs_width_;

    Eigen::VectorXd z = Eigen::VectorXd::Zero(spec_.output_dim);
    for (int f = 0; f < kFrameStackSize; ++f) {
        const Observation& obs = *frames[static_cast<std::size_t>(f)];
        if (obs.width != obs_width_) {
            throw DimensionError("observation width " + std::to_string(obs.width) +
                                 " does not match featurizer window " + std::to_string(obs_width_));
        }
        const int base = f * frame_length_;
        for (int i = 0; i < cells; ++i) {
            const std::uint8_t code = obs.cells[static_cast<std::size_t>(i)];
            if (code >= kCellCodeCount) throw DomainError("cell code out of range");
            z += projection_.col(base + i * kCellCodeCount + code);
        }
        if (obs.carried) z += projection_.col(base + cells * kCellCodeCount);
    }

    const double norm = z.norm();
    if (!(norm > 0.0)) throw ConsistencyError("latent has zero norm");
    z /= norm;
    return std::vector<double>(z.data(), z.data() + z.size());
}

std::vector<std::vector<double>> Featurizer::encode_episode(
    std::span<const Observation> episode) const {
    std::vector<std::vector<double>> latents;
    latents.reserve(episode.size());
    FrameStack stack;
    for (const Observation& obs : episode) {
        stack.push(obs);
        latents.push_back(encode(stack));
    }
    return latents;
}

}  // namespace boa
