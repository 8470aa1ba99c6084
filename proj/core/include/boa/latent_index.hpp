#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "boa/distributions.hpp"
#include "boa/errors.hpp"
#include "boa/featurizer.hpp"

namespace boa {

// Where an index entry came from and what the demonstrator did there.
struct EntryMeta {
    std::uint32_t trajectory = 0;
    std::uint32_t step = 0;
    std::uint32_t action = 0;

    bool operator==(const EntryMeta&) const = default;
};

struct Neighbor {
    std::uint32_t entry = 0;
    double distance_sq = 0.0;
};

// Exact L2 nearest-neighbour index over demonstration latents. Latents are
// held as float32 in one contiguous row-major block; distances are
// accumulated in double after widening. Queries never approximate and never
// clamp k.
class LatentIndex {
public:
    LatentIndex(int dim, int action_count, const FeaturizerSpec& featurizer);

    int dim() const { return dim_; }
    int action_count() const { return action_count_; }
    std::size_t size() const { return metas_.size(); }
    std::size_t trajectory_count() const;  // distinct trajectory ids
    const FeaturizerSpec& featurizer() const { return featurizer_; }

    void add(std::span<const float> latent, const EntryMeta& meta);
    void add(std::span<const double> latent, const EntryMeta& meta);

    std::span<const float> latent(std::uint32_t entry) const;
    const EntryMeta& meta(std::uint32_t entry) const;

    // k nearest entries by squared L2 distance, ascending; equal distances
    // order by lower entry id. k < 1 or k > size() is a query error.
    std::vector<Neighbor> query(std::span<const double> q, int k) const;

    // Per-action occurrence counts among the given neighbours.
    CountVector action_counts(std::span<const Neighbor> neighbors) const;

    void save(const std::string& path) const;
    static LatentIndex load(const std::string& path);

private:
    int dim_ = 0;
    int action_count_ = 0;
    FeaturizerSpec featurizer_;
    std::vector<float> latents_;  // size() * dim_, row-major
    std::vector<EntryMeta> metas_;
};

}  // namespace boa
