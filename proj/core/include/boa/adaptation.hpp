#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "boa/distributions.hpp"
#include "boa/errors.hpp"
#include "boa/latent_index.hpp"
#include "boa/policies.hpp"
#include "boa/rng.hpp"

namespace boa {

enum class DecisionMode : std::uint8_t {
    sample_dirichlet_then_categorical,
    mean_categorical,
    argmax_mean,
};

DecisionMode decision_mode_from_name(const std::string& name);
std::string decision_mode_name(DecisionMode mode);

struct BoaConfig {
    int k = 5;
    DecisionMode mode = DecisionMode::sample_dirichlet_then_categorical;
    double epsilon = ConcentrationVector::kFloor;  // concentration floor

    void validate() const;
};

// alpha_i = max(k * prior_i, epsilon * k) + counts_i. The floor scales with
// k so its relative weight against the counts is k-invariant. counts must
// total exactly k.
ConcentrationVector posterior_concentration(const ActionDistribution& prior,
                                            const CountVector& counts, int k,
                                            double epsilon = ConcentrationVector::kFloor);

// Everything one adapted decision rests on, sufficient to recompute the
// posterior from the record itself.
struct StepDiagnostics {
    ActionDistribution prior;
    CountVector counts;
    ConcentrationVector posterior;
    std::vector<Neighbor> neighbors;
    int action = 0;
    double query_ms = 0.0;
};

// Adapted action selection: the base policy's distribution becomes a
// Dirichlet prior, retrieved neighbour actions become Multinomial evidence,
// and the action comes from the posterior per the configured mode.
class BoaPolicy {
public:
    BoaPolicy(const Policy& prior, const LatentIndex& index, const BoaConfig& config);

    const BoaConfig& config() const { return config_; }
    int action_count() const { return index_->action_count(); }

    StepDiagnostics decide(const PolicyInput& in, Rng& rng) const;

private:
    const Policy* prior_ = nullptr;
    const LatentIndex* index_ = nullptr;
    BoaConfig config_;
};

struct ZipConfig {
    int horizon = 20;        // max actions taken from one anchor, search step included
    double divergence = 0.5;  // squared-distance threshold that forces a re-search

    void validate() const;
};

struct ZipDecision {
    int action = 0;
    bool searched = false;
    std::uint32_t anchor_entry = 0;  // entry the action was taken from
    double query_ms = 0.0;
};

// Nearest-neighbour action copying: anchor on the closest indexed step,
// then replay that trajectory's subsequent actions until the horizon runs
// out, the trajectory ends, or the live latent drifts past the divergence
// threshold; each of those triggers a fresh k=1 search.
class ZipPolicy {
public:
    ZipPolicy(const LatentIndex& index, const ZipConfig& config);

    const ZipConfig& config() const { return config_; }
    int action_count() const { return index_->action_count(); }

    void reset();  // forget the anchor at episode starts
    ZipDecision decide(std::span<const double> latent);

private:
    const LatentIndex* index_ = nullptr;
    ZipConfig config_;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> entry_at_;  // (traj, step)
    bool anchored_ = false;
    std::uint32_t cursor_ = 0;  // entry id the last action came from
    int copied_ = 0;            // actions taken from the current anchor
};

}  // namespace boa
