#include "boa/latent_index.hpp"

#include <algorithm>
#include <set>

#include "boa/io.hpp"

namespace boa {

namespace {
constexpr char kMagic[] = "BOAIDX1";
constexpr std::uint32_t kVersion = 1;
}  // namespace

LatentIndex::LatentIndex(int dim, int action_count, const FeaturizerSpec& featurizer)
    : dim_(dim), action_count_(action_count), featurizer_(featurizer) {
    if (dim_ < 1) throw SpecError("index dim must be positive");
    if (action_count_ < 1) throw SpecError("index action count must be positive");
    if (featurizer_.output_dim != dim_) {
        throw ConsistencyError("featurizer output dim does not match index dim");
    }
}

std::size_t LatentIndex::trajectory_count() const {
    std::set<std::uint32_t> ids;
    for (const EntryMeta& m : metas_) ids.insert(m.trajectory);
    return ids.size();
}

void LatentIndex::add(std::span<const float> latent, const EntryMeta& meta) {
    if (latent.size() != static_cast<std::size_t>(dim_)) {
        throw DimensionError("latent has " + std::to_string(latent.size()) + " dims, index has " +
                             std::to_string(dim_));
    }
    if (meta.action >= static_cast<std::uint32_t>(action_count_)) {
        throw DomainError("entry action out of range");
    }
    latents_.insert(latents_.end(), latent.begin(), latent.end());
    metas_.push_back(meta);
}

void LatentIndex::add(std::span<const double> latent, const EntryMeta& meta) {
    std::vector<float> narrowed(latent.size());
    for (std::size_t i = 0; i < latent.size(); ++i) narrowed[i] = static_cast<float>(latent[i]);
    add(std::span<const float>(narrowed), meta);
}

std::span<const float> LatentIndex::latent(std::uint32_t entry) const {
    if (entry >= metas_.size()) throw DomainError("entry id out of range");
    return {latents_.data() + static_cast<std::size_t>(entry) * dim_,
            static_cast<std::size_t>(dim_)};
}

const EntryMeta& LatentIndex::meta(std::uint32_t entry) const {
    if (entry >= metas_.size()) throw DomainError("entry id out of range");
    return metas_[entry];
}

std::vector<Neighbor> LatentIndex::query(std::span<const double> q, int k) const {
    if (q.size() != static_cast<std::size_t>(dim_)) {
        throw DimensionError("query has " + std::to_string(q.size()) + " dims, index has " +
                             std::to_string(dim_));
    }
    if (k < 1) throw QueryError("k must be at least 1");
    if (static_cast<std::size_t>(k) > metas_.size()) {
        throw QueryError("k = " + std::to_string(k) + " exceeds index size " +
                         std::to_string(metas_.size()));
    }

    std::vector<Neighbor> all(metas_.size());
    const float* row = latents_.data();
    for (std::size_t e = 0; e < metas_.size(); ++e, row += dim_) {
        double acc = 0.0;
        for (int i = 0; i < dim_; ++i) {
            const double diff = q[static_cast<std::size_t>(i)] - static_cast<double>(row[i]);
            acc += diff * diff;
        }
        all[e] = {static_cast<std::uint32_t>(e), acc};
    }
    auto closer = [](const Neighbor& a, const Neighbor& b) {
        if (a.distance_sq != b.distance_sq) return a.distance_sq < b.distance_sq;
        return a.entry < b.entry;
    };
    std::partial_sort(all.begin(), all.begin() + k, all.end(), closer);
    all.resize(static_cast<std::size_t>(k));
    return all;
}

CountVector LatentIndex::action_counts(std::span<const Neighbor> neighbors) const {
    std::vector<std::uint32_t> counts(static_cast<std::size_t>(action_count_), 0);
    for (const Neighbor& n : neighbors) {
        counts[meta(n.entry).action] += 1;
    }
    return CountVector(std::move(counts));
}

void LatentIndex::save(const std::string& path) const {
    io::Writer w(path);
    w.text(kMagic);
    w.u32(kVersion);
    w.u32(static_cast<std::uint32_t>(dim_));
    w.u32(static_cast<std::uint32_t>(action_count_));
    w.u32(static_cast<std::uint32_t>(metas_.size()));
    for (std::size_t e = 0; e < metas_.size(); ++e) {
        w.bytes(latents_.data() + e * dim_, sizeof(float) * static_cast<std::size_t>(dim_));
        w.u32(metas_[e].trajectory);
        w.u32(metas_[e].step);
        w.u32(metas_[e].action);
    }
    w.u64(featurizer_.seed);
    w.u32(static_cast<std::uint32_t>(featurizer_.output_dim));
    w.u32(static_cast<std::uint32_t>(featurizer_.input_dim));
    w.close();
}

LatentIndex LatentIndex::load(const std::string& path) {
    io::Reader r(path);
    io::expect_magic(r, kMagic);
    const std::uint32_t version = r.u32();
    if (version != kVersion) {
        throw FormatError("unsupported index version " + std::to_string(version));
    }
    const std::uint32_t dim = r.u32();
    const std::uint32_t action_count = r.u32();
    const std::uint32_t count = r.u32();
    if (dim == 0 || action_count == 0) throw FormatError("index header has zero dims or actions");

    std::vector<float> latents(static_cast<std::size_t>(count) * dim);
    std::vector<EntryMeta> metas(count);
    for (std::uint32_t e = 0; e < count; ++e) {
        r.bytes(latents.data() + static_cast<std::size_t>(e) * dim, sizeof(float) * dim);
        metas[e].trajectory = r.u32();
        metas[e].step = r.u32();
        metas[e].action = r.u32();
        if (metas[e].action >= action_count) {
            throw FormatError("entry action out of range in index file");
        }
    }
    FeaturizerSpec feat;
    feat.seed = r.u64();
    feat.output_dim = static_cast<int>(r.u32());
    feat.input_dim = static_cast<int>(r.u32());
    if (!r.at_eof()) throw FormatError("trailing bytes after index payload");
    if (feat.output_dim != static_cast<int>(dim)) {
        throw FormatError("index dim does not match recorded featurizer output dim");
    }

    LatentIndex index(static_cast<int>(dim), static_cast<int>(action_count), feat);
    index.latents_ = std::move(latents);
    index.metas_ = std::move(metas);
    return index;
}

}  // namespace boa
