#include "boa/adaptation.hpp"

#include <algorithm>
#include <chrono>

namespace boa {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    const auto end = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(end - start).count();
}

}  // namespace

DecisionMode decision_mode_from_name(const std::string& name) {
    if (name == "sample_dirichlet_then_categorical") {
        return DecisionMode::sample_dirichlet_then_categorical;
    }
    if (name == "mean_categorical") return DecisionMode::mean_categorical;
    if (name == "argmax_mean") return DecisionMode::argmax_mean;
    throw SpecError("unknown decision mode: " + name);
}

std::string decision_mode_name(DecisionMode mode) {
    switch (mode) {
        case DecisionMode::sample_dirichlet_then_categorical:
            return "sample_dirichlet_then_categorical";
        case DecisionMode::mean_categorical:
            return "mean_categorical";
        case DecisionMode::argmax_mean:
            return "argmax_mean";
    }
    throw SpecError("invalid decision mode enum");
}

void BoaConfig::validate() const {
    if (k < 1) throw SpecError("k must be at least 1");
    if (!(epsilon > 0.0)) throw SpecError("concentration floor must be positive");
}

ConcentrationVector posterior_concentration(const ActionDistribution& prior,
                                            const CountVector& counts, int k, double epsilon) {
    if (prior.size() != counts.size()) {
        throw DimensionError("prior and counts differ in length");
    }
    if (k < 1) throw DomainError("k must be at least 1");
    if (!(epsilon > 0.0)) throw DomainError("concentration floor must be positive");
    if (counts.total() != static_cast<std::uint64_t>(k)) {
        throw ConsistencyError("counts total " + std::to_string(counts.total()) +
                               " does not equal k = " + std::to_string(k));
    }
    const double floor = epsilon * static_cast<double>(k);
    std::vector<double> alpha(prior.size());
    for (std::size_t i = 0; i < prior.size(); ++i) {
        alpha[i] = std::max(static_cast<double>(k) * prior[i], floor) +
                   static_cast<double>(counts[i]);
    }
    return ConcentrationVector(std::move(alpha));
}

BoaPolicy::BoaPolicy(const Policy& prior, const LatentIndex& index, const BoaConfig& config)
    : prior_(&prior), index_(&index), config_(config) {
    config_.validate();
    if (prior.action_count() != index.action_count()) {
        throw ConsistencyError("policy and index disagree on the action count");
    }
}

StepDiagnostics BoaPolicy::decide(const PolicyInput& in, Rng& rng) const {
    ActionDistribution prior = prior_->distribution(in);

    const auto start = std::chrono::steady_clock::now();
    std::vector<Neighbor> neighbors = index_->query(in.latent, config_.k);
    const double query_ms = elapsed_ms(start);

    CountVector counts = index_->action_counts(neighbors);
    ConcentrationVector posterior =
        posterior_concentration(prior, counts, config_.k, config_.epsilon);

    int action = 0;
    switch (config_.mode) {
        case DecisionMode::sample_dirichlet_then_categorical: {
            const ActionDistribution p = sample_dirichlet(posterior, rng);
            action = static_cast<int>(sample_categorical(p, rng));
            break;
        }
        case DecisionMode::mean_categorical:
            action = static_cast<int>(sample_categorical(posterior.mean(), rng));
            break;
        case DecisionMode::argmax_mean:
            action = static_cast<int>(posterior.mean().argmax());
            break;
    }

    return StepDiagnostics{std::move(prior), std::move(counts), std::move(posterior),
                           std::move(neighbors), action, query_ms};
}

void ZipConfig::validate() const {
    if (horizon < 1) throw SpecError("copy horizon must be at least 1");
    if (divergence < 0.0) throw SpecError("divergence threshold must be non-negative");
}

ZipPolicy::ZipPolicy(const LatentIndex& index, const ZipConfig& config)
    : index_(&index), config_(config) {
    config_.validate();
    if (index.size() == 0) throw UsageError("action copying needs a non-empty index");
    for (std::uint32_t e = 0; e < index.size(); ++e) {
        const EntryMeta& m = index.meta(e);
        if (!entry_at_.emplace(std::make_pair(m.trajectory, m.step), e).second) {
            throw ConsistencyError("duplicate (trajectory, step) in index");
        }
    }
}

void ZipPolicy::reset() {
    anchored_ = false;
    cursor_ = 0;
    copied_ = 0;
}

ZipDecision ZipPolicy::decide(std::span<const double> latent) {
    bool search = !anchored_ || copied_ >= config_.horizon;
    if (!search) {
        const EntryMeta& m = index_->meta(cursor_);
        const auto next = entry_at_.find({m.trajectory, m.step + 1});
        if (next == entry_at_.end()) {
            search = true;  // anchored trajectory exhausted
        } else {
            const std::span<const float> stored = index_->latent(next->second);
            double d2 = 0.0;
            for (std::size_t i = 0; i < latent.size(); ++i) {
                const double diff = latent[i] - static_cast<double>(stored[i]);
                d2 += diff * diff;
            }
            if (d2 > config_.divergence) {
                search = true;
            } else {
                cursor_ = next->second;
                copied_ += 1;
                return {static_cast<int>(index_->meta(cursor_).action), false, cursor_, 0.0};
            }
        }
    }

    const auto start = std::chrono::steady_clock::now();
    const std::vector<Neighbor> nearest = index_->query(latent, 1);
    const double query_ms = elapsed_ms(start);
    cursor_ = nearest.front().entry;
    anchored_ = true;
    copied_ = 1;
    return {static_cast<int>(index_->meta(cursor_).action), true, cursor_, query_ms};
}

}  // namespace boa
