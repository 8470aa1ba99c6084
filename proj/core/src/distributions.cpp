#include "boa/distributions.hpp"

#include <cmath>
#include <limits>

#include "boa/special_functions.hpp"

namespace boa {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_size(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw DimensionError(std::string(what) + ": length mismatch (" + std::to_string(a) +
                             " vs " + std::to_string(b) + ")");
    }
}
}  // namespace

ActionDistribution::ActionDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw DimensionError("ActionDistribution: empty");
    double sum = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0)) throw DomainError("ActionDistribution: negative or NaN entry");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
        throw DomainError("ActionDistribution: entries sum to " + std::to_string(sum));
    }
}

std::size_t ActionDistribution::argmax() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < probs_.size(); ++i) {
        if (probs_[i] > probs_[best]) best = i;
    }
    return best;
}

ActionDistribution ActionDistribution::uniform(std::size_t k) {
    if (k == 0) throw DimensionError("uniform: k must be >= 1");
    return ActionDistribution(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

ConcentrationVector::ConcentrationVector(std::vector<double> alpha) : alpha_(std::move(alpha)) {
    if (alpha_.empty()) throw DimensionError("ConcentrationVector: empty");
    for (double& a : alpha_) {
        if (!(a >= 0.0)) throw DomainError("ConcentrationVector: negative or NaN entry");
        if (!std::isfinite(a)) throw DomainError("ConcentrationVector: non-finite entry");
        if (a < kFloor) a = kFloor;
        total_ += a;
    }
    // Recompute after flooring so total() matches the stored entries.
    total_ = 0.0;
    for (double a : alpha_) total_ += a;
}

ActionDistribution ConcentrationVector::mean() const {
    std::vector<double> m(alpha_.size());
    for (std::size_t i = 0; i < alpha_.size(); ++i) m[i] = alpha_[i] / total_;
    return ActionDistribution(std::move(m));
}

CountVector::CountVector(std::vector<std::uint32_t> counts) : counts_(std::move(counts)) {
    if (counts_.empty()) throw DimensionError("CountVector: empty");
    for (std::uint32_t c : counts_) total_ += c;
}

double log_multinomial_pmf(const CountVector& counts, const ActionDistribution& probs) {
    require_same_size(counts.size(), probs.size(), "log_multinomial_pmf");
    double lp = log_factorial(counts.total());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const std::uint32_t c = counts[i];
        if (c == 0) continue;
        if (probs[i] == 0.0) return -kInf;
        lp -= log_factorial(c);
        lp += static_cast<double>(c) * std::log(probs[i]);
    }
    return lp;
}

double log_multivariate_beta(const ConcentrationVector& alpha) {
    double lb = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (!(alpha[i] > 0.0)) throw DomainError("log_multivariate_beta: non-positive entry");
        lb += log_gamma(alpha[i]);
    }
    return lb - log_gamma(alpha.total());
}

double log_dirichlet_pdf(const ActionDistribution& x, const ConcentrationVector& alpha) {
    require_same_size(x.size(), alpha.size(), "log_dirichlet_pdf");
    double lp = -log_multivariate_beta(alpha);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double a = alpha[i];
        if (x[i] == 0.0) {
            if (a > 1.0) return -kInf;  // density vanishes on the boundary
            if (a < 1.0) return kInf;   // density diverges on the boundary
            continue;                   // a == 1: factor is x^0
        }
        lp += (a - 1.0) * std::log(x[i]);
    }
    return lp;
}

ConcentrationVector conjugate_update(const ConcentrationVector& alpha, const CountVector& counts) {
    require_same_size(alpha.size(), counts.size(), "conjugate_update");
    std::vector<double> out(alpha.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        out[i] = alpha[i] + static_cast<double>(counts[i]);
    }
    return ConcentrationVector(std::move(out));
}

ActionDistribution sample_dirichlet(const ConcentrationVector& alpha, Rng& rng) {
    std::vector<double> lg(alpha.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        lg[i] = rng.log_gamma_variate(alpha[i]);
    }
    const double lse = log_sum_exp(lg);
    std::vector<double> x(alpha.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) x[i] = std::exp(lg[i] - lse);
    return ActionDistribution(std::move(x));
}

std::size_t sample_categorical(const ActionDistribution& p, Rng& rng) {
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        acc += p[i];
        if (u < acc) return i;
    }
    // u landed past the accumulated mass (sum slightly below 1): return the
    // last class with positive probability.
    for (std::size_t i = p.size(); i-- > 0;) {
        if (p[i] > 0.0) return i;
    }
    return p.size() - 1;
}

}  // namespace boa
