#pragma once

#include <cstdint>
#include <vector>

#include "boa/rng.hpp"

namespace boa {

// Probability vector over K discrete actions. Entries are non-negative and
// sum to 1 within 1e-9; both conditions are checked at construction.
class ActionDistribution {
public:
    static constexpr double kSumTolerance = 1e-9;

    explicit ActionDistribution(std::vector<double> probs);

    std::size_t size() const { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    const std::vector<double>& probs() const { return probs_; }

    // Index of the largest entry, lowest index on ties.
    std::size_t argmax() const;

    static ActionDistribution uniform(std::size_t k);

private:
    std::vector<double> probs_;
};

// Positive Dirichlet parameters. Entries below kFloor are raised to it at
// construction so that zero-probability priors still yield a proper
// distribution; negative or non-finite entries are rejected.
class ConcentrationVector {
public:
    static constexpr double kFloor = 1e-6;

    explicit ConcentrationVector(std::vector<double> alpha);

    std::size_t size() const { return alpha_.size(); }
    double operator[](std::size_t i) const { return alpha_[i]; }
    const std::vector<double>& alpha() const { return alpha_; }
    double total() const { return total_; }

    // Posterior mean alpha_i / sum(alpha).
    ActionDistribution mean() const;

private:
    std::vector<double> alpha_;
    double total_ = 0.0;
};

// Non-negative per-action counts with a cached total.
class CountVector {
public:
    explicit CountVector(std::vector<std::uint32_t> counts);

    std::size_t size() const { return counts_.size(); }
    std::uint32_t operator[](std::size_t i) const { return counts_[i]; }
    const std::vector<std::uint32_t>& counts() const { return counts_; }
    std::uint64_t total() const { return total_; }

private:
    std::vector<std::uint32_t> counts_;
    std::uint64_t total_ = 0;
};

// ln P(X = counts) for a Multinomial with N = counts.total(). Returns
// -inf when some count sits on a zero-probability class.
double log_multinomial_pmf(const CountVector& counts, const ActionDistribution& probs);

// ln B(alpha) = sum(lnG(alpha_i)) - lnG(sum(alpha)).
double log_multivariate_beta(const ConcentrationVector& alpha);

// ln f(x; alpha) of the Dirichlet density.
double log_dirichlet_pdf(const ActionDistribution& x, const ConcentrationVector& alpha);

// Textbook posterior: alpha + counts, componentwise.
ConcentrationVector conjugate_update(const ConcentrationVector& alpha, const CountVector& counts);

// Dirichlet draw as K independent Gamma(alpha_i, 1) variates normalized by
// their sum; computed in log space so extreme concentrations cannot
// underflow the normalizer.
ActionDistribution sample_dirichlet(const ConcentrationVector& alpha, Rng& rng);

// Single categorical draw by inverse CDF.
std::size_t sample_categorical(const ActionDistribution& p, Rng& rng);

}  // namespace boa
