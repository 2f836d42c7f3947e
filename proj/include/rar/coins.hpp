#pragma once

#include <Eigen/Core>
#include <memory>

#include "rar/core.hpp"
#include "rar/targets.hpp"

namespace rar {

/// g_k(x, y) = y_k (y_k/x_k)^gamma / sum_j y_j (y_j/x_j)^gamma, the allocation
/// function mapping (current proportions, estimated target) to assignment
/// probabilities. gamma >= 0 controls the degree of randomness; gamma = 0 is
/// the sequential maximum likelihood procedure. Requires x > 0 when gamma > 0.
Eigen::VectorXd dbcd_allocation(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                double gamma);

/// Two-arm discrete biasing around the estimated target: alpha*rho when arm 1
/// is overweighted, 1 - alpha*(1-rho) when underweighted, rho on the tie
/// (|x1 - rho| <= tie_tol).
double erade_probability(double frac1, double rho1, double alpha,
                         double tie_tol = 1e-12);

/// Continuous multi-arm biasing with weight psi(t) = 1 + sqrt((t^{2 gamma} - 1) v 0):
/// overweighted arms keep weight 1, underweighted arms gain weight.
Eigen::VectorXd smoothed_erade_allocation(const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& y, double gamma);

/// Posterior probability that p1 > p2 under independent uniform priors given
/// (successes, trials) per arm. Evaluated with log-gamma sums; exact
/// combinatorial identity, no Monte Carlo.
double thompson_posterior(long long s1, long long s2, long long n1, long long n2);

/// p^c / (p^c + (1-p)^c); c = 0 gives 1/2, c = 1 the identity.
double thall_wathen_probability(double p_hat, double c);

/// Shared base for policies that drive the allocation off (N_m/m, rho(theta_hat)).
class EstimatorPolicy : public DesignPolicy {
public:
    EstimatorPolicy(std::shared_ptr<const TargetAllocation> target, Family family,
                    EstimatorOptions eopts = {}, double clamp_eps = 0.01);

    int arms() const override { return target_->arms(); }
    void on_assigned(int arm) override {
        ++counts_[arm];
        ++total_;
    }
    void observe(int arm, double outcome) override { est_.add(arm, outcome); }
    void set_guess(const Theta& theta0) override { guess_ = theta0; }

    Theta theta_hat() const { return estimate(est_, family_, guess_, eopts_); }
    /// Clamped estimated target rho(theta_hat).
    Eigen::VectorXd target_estimate() const {
        return clamp_simplex(target_->rho(theta_hat()), clamp_eps_);
    }
    /// Current sample allocation proportions N_m/m; throws before any
    /// assignment or while an arm is unvisited (the warm start guarantee).
    Eigen::VectorXd proportions() const;

protected:
    std::shared_ptr<const TargetAllocation> target_;
    Family family_;
    EstimatorOptions eopts_;
    double clamp_eps_;
    EstimatorState est_;
    Theta guess_;
    std::vector<long long> counts_;
    long long total_ = 0;
};

class SmlpPolicy final : public EstimatorPolicy {
public:
    using EstimatorPolicy::EstimatorPolicy;
    std::string id() const override { return "smlp"; }
    Eigen::VectorXd next_probabilities() override { return target_estimate(); }
};

class DbcdPolicy final : public EstimatorPolicy {
public:
    DbcdPolicy(std::shared_ptr<const TargetAllocation> target, Family family, double gamma,
               EstimatorOptions eopts = {}, double clamp_eps = 0.01);
    std::string id() const override { return "dbcd"; }
    Eigen::VectorXd next_probabilities() override;

private:
    double gamma_;
};

class EradePolicy final : public EstimatorPolicy {
public:
    EradePolicy(std::shared_ptr<const TargetAllocation> target, Family family, double alpha,
                EstimatorOptions eopts = {}, double clamp_eps = 0.01);
    std::string id() const override { return "erade"; }
    Eigen::VectorXd next_probabilities() override;

private:
    double alpha_;
};

class SmoothedEradePolicy final : public EstimatorPolicy {
public:
    SmoothedEradePolicy(std::shared_ptr<const TargetAllocation> target, Family family,
                        double gamma, EstimatorOptions eopts = {}, double clamp_eps = 0.01);
    std::string id() const override { return "serade"; }
    Eigen::VectorXd next_probabilities() override;

private:
    double gamma_;
};

/// Bayesian two-arm rule for binary outcomes: posterior probability that
/// arm 1 is better, tempered by the exponent c = (N_m1 + N_m2) / (2n) (or a
/// fixed c when supplied).
class ThompsonPolicy final : public DesignPolicy {
public:
    ThompsonPolicy(int horizon, double fixed_c = -1.0);
    std::string id() const override { return "thompson"; }
    int arms() const override { return 2; }
    Eigen::VectorXd next_probabilities() override;
    void on_assigned(int arm) override {
        ++counts_[arm];
    }
    void observe(int arm, double outcome) override {
        obs_n_[arm] += 1;
        if (outcome > 0.5) obs_s_[arm] += 1;
    }

private:
    int horizon_;
    double fixed_c_;
    long long counts_[2] = {0, 0};
    long long obs_n_[2] = {0, 0};
    long long obs_s_[2] = {0, 0};
};

/// Fixed-probability randomization; the uniform case is complete
/// randomization.
class CompleteRandomizationPolicy final : public DesignPolicy {
public:
    explicit CompleteRandomizationPolicy(int arms);
    explicit CompleteRandomizationPolicy(Eigen::VectorXd p);
    std::string id() const override { return "cr"; }
    int arms() const override { return static_cast<int>(p_.size()); }
    Eigen::VectorXd next_probabilities() override { return p_; }
    void observe(int, double) override {}

private:
    Eigen::VectorXd p_;
};

/// Deterministic two-arm play-the-winner: repeat the arm after an observed
/// success, switch after an observed failure; uniform before any response.
class PlayTheWinnerPolicy final : public DesignPolicy {
public:
    std::string id() const override { return "pw"; }
    int arms() const override { return 2; }
    Eigen::VectorXd next_probabilities() override;
    void observe(int arm, double outcome) override {
        last_arm_ = arm;
        last_success_ = outcome > 0.5;
        has_obs_ = true;
    }

private:
    int last_arm_ = 0;
    bool last_success_ = false;
    bool has_obs_ = false;
};

}  // namespace rar
