#include "boa/policies.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "boa/io.hpp"

namespace boa {

namespace {

using nlohmann::json;

json read_header(io::Reader& r, const std::string& expected_kind) {
    json header;
    try {
        header = json::parse(r.line());
    } catch (const json::exception& e) {
        throw FormatError(std::string("policy header is not valid JSON: ") + e.what());
    }
    if (!header.contains("kind") || !header["kind"].is_string()) {
        throw FormatError("policy header lacks a kind field");
    }
    if (!expected_kind.empty() && header["kind"] != expected_kind) {
        throw FormatError("policy file holds kind '" + header["kind"].get<std::string>() +
                          "', expected '" + expected_kind + "'");
    }
    if (!header.contains("version") || header["version"] != 1) {
        throw FormatError("unsupported policy file version");
    }
    return header;
}

}  // namespace

RandomPolicy::RandomPolicy(int actions) : actions_(actions) {
    if (actions_ < 1) throw SpecError("action count must be positive");
}

ActionDistribution RandomPolicy::distribution(const PolicyInput&) const {
    return ActionDistribution::uniform(static_cast<std::size_t>(actions_));
}

TabularBC::TabularBC(int actions, double beta, double tau)
    : actions_(actions), beta_(beta), tau_(tau) {
    if (actions_ < 1) throw SpecError("action count must be positive");
    if (!(beta_ > 0.0)) throw SpecError("beta must be positive");
    if (!(tau_ > 0.0)) throw SpecError("tau must be positive");
}

void TabularBC::fit(std::span<const std::uint64_t> obs_hashes, std::span<const int> actions) {
    if (obs_hashes.size() != actions.size()) {
        throw FitError("observation and action sequences differ in length");
    }
    if (obs_hashes.empty()) throw FitError("no training steps");
    table_.clear();
    for (std::size_t i = 0; i < obs_hashes.size(); ++i) {
        const int a = actions[i];
        if (a < 0 || a >= actions_) throw FitError("training action out of range");
        auto [it, inserted] =
            table_.try_emplace(obs_hashes[i], std::vector<std::uint32_t>(actions_, 0));
        it->second[static_cast<std::size_t>(a)] += 1;
    }
}

ActionDistribution TabularBC::distribution(const PolicyInput& in) const {
    if (in.obs == nullptr) throw UsageError("tabular policy needs an observation");
    const auto it = table_.find(in.obs->hash());
    if (it == table_.end()) {
        return ActionDistribution::uniform(static_cast<std::size_t>(actions_));
    }
    std::vector<double> weights(static_cast<std::size_t>(actions_));
    double total = 0.0;
    for (int a = 0; a < actions_; ++a) {
        const double w =
            std::pow(static_cast<double>(it->second[static_cast<std::size_t>(a)]) + beta_,
                     1.0 / tau_);
        weights[static_cast<std::size_t>(a)] = w;
        total += w;
    }
    for (double& w : weights) w /= total;
    return ActionDistribution(std::move(weights));
}

void TabularBC::save(const std::string& path) const {
    json header;
    header["kind"] = "bc_tabular";
    header["version"] = 1;
    header["actions"] = actions_;
    header["beta"] = beta_;
    header["tau"] = tau_;
    header["entries"] = table_.size();

    io::Writer w(path);
    w.text(header.dump());
    w.text("\n");
    for (const auto& [hash, counts] : table_) {
        w.u64(hash);
        for (std::uint32_t c : counts) w.u32(c);
    }
    w.close();
}

TabularBC TabularBC::load(const std::string& path) {
    io::Reader r(path);
    const json header = read_header(r, "bc_tabular");
    const int actions = header.at("actions").get<int>();
    const auto entries = header.at("entries").get<std::uint64_t>();
    TabularBC policy(actions, header.at("beta").get<double>(), header.at("tau").get<double>());
    for (std::uint64_t i = 0; i < entries; ++i) {
        const std::uint64_t hash = r.u64();
        std::vector<std::uint32_t> counts(static_cast<std::size_t>(actions));
        for (auto& c : counts) c = r.u32();
        if (!policy.table_.emplace(hash, std::move(counts)).second) {
            throw FormatError("duplicate observation hash in policy file");
        }
    }
    if (!r.at_eof()) throw FormatError("trailing bytes after policy payload");
    return policy;
}

double linear_bc_loss_gradient(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                               const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias,
                               Eigen::MatrixXd* grad_weights, Eigen::VectorXd* grad_bias) {
    if (inputs.rows() != targets.rows()) throw DimensionError("batch row counts differ");
    if (inputs.rows() < 1) throw DimensionError("empty batch");
    if (weights.rows() != targets.cols() || weights.cols() != inputs.cols() ||
        bias.size() != weights.rows()) {
        throw DimensionError("parameter shapes do not match batch");
    }
    const double n = static_cast<double>(inputs.rows());
    Eigen::MatrixXd logits = inputs * weights.transpose();
    logits.rowwise() += bias.transpose();
    const Eigen::VectorXd peaks = logits.rowwise().maxCoeff();
    Eigen::MatrixXd p = (logits.colwise() - peaks).array().exp();
    const Eigen::VectorXd row_sums = p.rowwise().sum();
    p.array().colwise() /= row_sums.array();
    const double loss =
        (peaks.array() + row_sums.array().log()).sum() / n - logits.cwiseProduct(targets).sum() / n;
    if (grad_weights != nullptr || grad_bias != nullptr) {
        const Eigen::MatrixXd g = (p - targets) / n;
        if (grad_weights != nullptr) *grad_weights = g.transpose() * inputs;
        if (grad_bias != nullptr) *grad_bias = g.colwise().sum().transpose();
    }
    return loss;
}

LinearBC::LinearBC(int actions, const FeaturizerSpec& featurizer)
    : actions_(actions), featurizer_(featurizer) {
    if (actions_ < 1) throw SpecError("action count must be positive");
    if (featurizer_.output_dim < 1) throw SpecError("featurizer output dim must be positive");
}

void LinearBC::fit(const std::vector<std::vector<double>>& latents, std::span<const int> actions,
                   const LinearFitConfig& config) {
    if (latents.size() != actions.size()) {
        throw FitError("latent and action sequences differ in length");
    }
    if (latents.empty()) throw FitError("no training steps");
    if (!(config.learning_rate > 0.0)) throw FitError("learning rate must be positive");
    if (config.epochs < 1) throw FitError("epochs must be positive");

    const int n = static_cast<int>(latents.size());
    const int d = featurizer_.output_dim;
    Eigen::MatrixXd x(n, d);
    for (int i = 0; i < n; ++i) {
        const auto& z = latents[static_cast<std::size_t>(i)];
        if (z.size() != static_cast<std::size_t>(d)) throw FitError("latent dim mismatch");
        for (int j = 0; j < d; ++j) x(i, j) = z[static_cast<std::size_t>(j)];
    }
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, actions_);
    for (int i = 0; i < n; ++i) {
        const int a = actions[static_cast<std::size_t>(i)];
        if (a < 0 || a >= actions_) throw FitError("training action out of range");
        y(i, a) = 1.0;
    }

    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(actions_, d);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(actions_);
    Eigen::MatrixXd gw(actions_, d);
    Eigen::VectorXd gb(actions_);
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        linear_bc_loss_gradient(x, y, w, b, &gw, &gb);
        w -= config.learning_rate * gw;
        b -= config.learning_rate * gb;
    }

    weights_ = w.cast<float>();
    bias_ = b.cast<float>();
    config_ = config;
    fitted_ = true;
}

ActionDistribution LinearBC::distribution(const PolicyInput& in) const {
    if (!fitted_) throw UsageError("linear policy used before fitting");
    if (in.latent.size() != static_cast<std::size_t>(featurizer_.output_dim)) {
        throw DimensionError("latent has " + std::to_string(in.latent.size()) +
                             " dims, policy expects " + std::to_string(featurizer_.output_dim));
    }
    std::vector<double> logits(static_cast<std::size_t>(actions_));
    for (int a = 0; a < actions_; ++a) {
        double acc = static_cast<double>(bias_(a));
        for (int j = 0; j < featurizer_.output_dim; ++j) {
            acc += static_cast<double>(weights_(a, j)) * in.latent[static_cast<std::size_t>(j)];
        }
        logits[static_cast<std::size_t>(a)] = acc;
    }
    const double peak = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (double& v : logits) {
        v = std::exp(v - peak);
        total += v;
    }
    for (double& v : logits) v /= total;
    return ActionDistribution(std::move(logits));
}

void LinearBC::save(const std::string& path) const {
    if (!fitted_) throw UsageError("saving an unfitted linear policy");
    json header;
    header["kind"] = "bc_linear";
    header["version"] = 1;
    header["actions"] = actions_;
    header["dim"] = featurizer_.output_dim;
    header["learning_rate"] = config_.learning_rate;
    header["epochs"] = config_.epochs;
    header["featurizer"] = {{"seed", featurizer_.seed},
                            {"output_dim", featurizer_.output_dim},
                            {"input_dim", featurizer_.input_dim}};

    io::Writer w(path);
    w.text(header.dump());
    w.text("\n");
    for (int a = 0; a < actions_; ++a) {
        for (int j = 0; j < featurizer_.output_dim; ++j) w.f32(weights_(a, j));
    }
    for (int a = 0; a < actions_; ++a) w.f32(bias_(a));
    w.close();
}

LinearBC LinearBC::load(const std::string& path) {
    io::Reader r(path);
    const json header = read_header(r, "bc_linear");
    const int actions = header.at("actions").get<int>();
    const int dim = header.at("dim").get<int>();
    FeaturizerSpec feat;
    feat.seed = header.at("featurizer").at("seed").get<std::uint64_t>();
    feat.output_dim = header.at("featurizer").at("output_dim").get<int>();
    feat.input_dim = header.at("featurizer").at("input_dim").get<int>();
    if (feat.output_dim != dim) {
        throw FormatError("policy dim does not match recorded featurizer output dim");
    }

    LinearBC policy(actions, feat);
    policy.weights_.resize(actions, dim);
    policy.bias_.resize(actions);
    for (int a = 0; a < actions; ++a) {
        for (int j = 0; j < dim; ++j) policy.weights_(a, j) = r.f32();
    }
    for (int a = 0; a < actions; ++a) policy.bias_(a) = r.f32();
    if (!r.at_eof()) throw FormatError("trailing bytes after policy payload");
    policy.config_.learning_rate = header.at("learning_rate").get<double>();
    policy.config_.epochs = header.at("epochs").get<int>();
    policy.fitted_ = true;
    return policy;
}

DegradedPolicy::DegradedPolicy(std::unique_ptr<Policy> base, double epsilon)
    : base_(std::move(base)), epsilon_(epsilon) {
    if (base_ == nullptr) throw UsageError("degraded policy needs a base policy");
    if (epsilon_ < 0.0 || epsilon_ > 1.0) throw DomainError("epsilon must lie in [0, 1]");
}

ActionDistribution DegradedPolicy::distribution(const PolicyInput& in) const {
    const ActionDistribution base = base_->distribution(in);
    const double u = 1.0 / static_cast<double>(base.size());
    std::vector<double> mixed(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        mixed[i] = (1.0 - epsilon_) * base[i] + epsilon_ * u;
    }
    return ActionDistribution(std::move(mixed));
}

std::string policy_file_kind(const std::string& path) {
    io::Reader r(path);
    const json header = read_header(r, "");
    return header["kind"].get<std::string>();
}

std::unique_ptr<Policy> load_policy(const std::string& path) {
    const std::string kind = policy_file_kind(path);
    if (kind == "bc_tabular") return std::make_unique<TabularBC>(TabularBC::load(path));
    if (kind == "bc_linear") return std::make_unique<LinearBC>(LinearBC::load(path));
    throw FormatError("unknown policy kind '" + kind + "'");
}

}  // namespace boa
