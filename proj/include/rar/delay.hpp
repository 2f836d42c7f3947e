#pragma once

#include <Eigen/Core>
#include <memory>
#include <vector>

#include "rar/core.hpp"
#include "rar/rng.hpp"

namespace rar {

/// Entry-time and response-time process. Gaps and response times are strictly
/// positive and independent across patients.
class DelayModel {
public:
    virtual ~DelayModel() = default;
    virtual double entry_gap(Rng& rng) const = 0;
    virtual double response_time(int arm, Rng& rng) const = 0;
};

/// Poisson entry process with exponential response times. Parameters are the
/// MEANS of the exponentials: entry gaps have mean lambda0 and the response
/// time on arm k has mean lambda_k, giving the geometric decay
/// mu_k(l) = (lambda_k / (lambda0 + lambda_k))^l for the probability that a
/// response is still unobserved after l further arrivals.
class ExponentialDelay final : public DelayModel {
public:
    ExponentialDelay(double entry_mean, std::vector<double> response_means);
    double entry_gap(Rng& rng) const override;
    double response_time(int arm, Rng& rng) const override;
    double entry_mean() const { return entry_mean_; }
    double response_mean(int arm) const { return response_means_[arm]; }

private:
    double entry_mean_;
    std::vector<double> response_means_;
};

/// mu_k(l) = (response_mean / (entry_mean + response_mean))^l.
double delay_probability(double entry_mean, double response_mean, int ell);

/// Statistics available just before the (m+1)-th assignment: only responses
/// with t_j + r_j <= t_{m+1} count. epoch_m == n() returns the complete data
/// (infinite horizon).
struct ObservedView {
    Eigen::VectorXd count;
    Eigen::VectorXd sum;
};

ObservedView observed_view(const TrialState& state, int epoch_m);

}  // namespace rar
