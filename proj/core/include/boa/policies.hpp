#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "boa/distributions.hpp"
#include "boa/errors.hpp"
#include "boa/featurizer.hpp"
#include "boa/gridworld.hpp"

namespace boa {

// What a policy gets to look at for one decision. obs is always present;
// latent is filled only when the surrounding agent runs a featurizer.
struct PolicyInput {
    const Observation* obs = nullptr;
    std::span<const double> latent;
};

class Policy {
public:
    virtual ~Policy() = default;

    virtual int action_count() const = 0;
    virtual ActionDistribution distribution(const PolicyInput& in) const = 0;

    // True when distribution() reads in.latent; lets callers skip encoding.
    virtual bool needs_latent() const { return false; }
};

class RandomPolicy : public Policy {
public:
    explicit RandomPolicy(int actions);

    int action_count() const override { return actions_; }
    ActionDistribution distribution(const PolicyInput&) const override;

private:
    int actions_ = 0;
};

// Count-based cloning over observation hashes. A seen observation maps to
// probabilities proportional to (count + beta)^(1/tau); an unseen one to
// the uniform distribution.
class TabularBC : public Policy {
public:
    static constexpr double kDefaultBeta = 0.01;
    static constexpr double kDefaultTau = 1.0;

    TabularBC(int actions, double beta = kDefaultBeta, double tau = kDefaultTau);

    void fit(std::span<const std::uint64_t> obs_hashes, std::span<const int> actions);

    int action_count() const override { return actions_; }
    ActionDistribution distribution(const PolicyInput& in) const override;

    std::size_t table_size() const { return table_.size(); }
    double beta() const { return beta_; }
    double tau() const { return tau_; }

    void save(const std::string& path) const;
    static TabularBC load(const std::string& path);

private:
    int actions_ = 0;
    double beta_ = kDefaultBeta;
    double tau_ = kDefaultTau;
    std::map<std::uint64_t, std::vector<std::uint32_t>> table_;
};

struct LinearFitConfig {
    double learning_rate = 0.5;
    int epochs = 300;
};

// Mean cross-entropy of softmax(weights * z + bias) against one-hot targets
// over a batch, with optional gradients. inputs is n x d, targets is n x
// actions (one-hot rows), weights is actions x d, bias is actions. Exposed
// so the descent step used by LinearBC::fit can be checked numerically.
double linear_bc_loss_gradient(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                               const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias,
                               Eigen::MatrixXd* grad_weights = nullptr,
                               Eigen::VectorXd* grad_bias = nullptr);

// Multinomial logistic regression on latents, trained by full-batch
// gradient descent from zero initialization. Parameters are held as float32
// once fitted; decisions widen to double.
class LinearBC : public Policy {
public:
    LinearBC(int actions, const FeaturizerSpec& featurizer);

    void fit(const std::vector<std::vector<double>>& latents, std::span<const int> actions,
             const LinearFitConfig& config = {});

    int action_count() const override { return actions_; }
    ActionDistribution distribution(const PolicyInput& in) const override;
    bool needs_latent() const override { return true; }

    int dim() const { return featurizer_.output_dim; }
    const FeaturizerSpec& featurizer() const { return featurizer_; }
    bool fitted() const { return fitted_; }

    void save(const std::string& path) const;
    static LinearBC load(const std::string& path);

private:
    int actions_ = 0;
    FeaturizerSpec featurizer_;
    LinearFitConfig config_;
    bool fitted_ = false;
    Eigen::MatrixXf weights_;  // actions x dim
    Eigen::VectorXf bias_;     // actions
};

// Mixes a base policy with the uniform distribution:
// p = (1 - epsilon) * base + epsilon * uniform.
class DegradedPolicy : public Policy {
public:
    DegradedPolicy(std::unique_ptr<Policy> base, double epsilon);

    int action_count() const override { return base_->action_count(); }
    ActionDistribution distribution(const PolicyInput& in) const override;
    bool needs_latent() const override { return base_->needs_latent(); }

    double epsilon() const { return epsilon_; }
    const Policy& base() const { return *base_; }

private:
    std::unique_ptr<Policy> base_;
    double epsilon_ = 0.0;
};

// Reads the kind field from a policy file header and loads accordingly.
std::unique_ptr<Policy> load_policy(const std::string& path);

// Kind string recorded in the file header ("bc_tabular" or "bc_linear").
std::string policy_file_kind(const std::string& path);

}  // namespace boa
