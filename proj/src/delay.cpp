#include "rar/delay.hpp"

#include <cmath>
#include <stdexcept>

namespace rar {

ExponentialDelay::ExponentialDelay(double entry_mean, std::vector<double> response_means)
    : entry_mean_(entry_mean), response_means_(std::move(response_means)) {
    if (!(entry_mean_ > 0.0))
        throw std::invalid_argument("delay model: entry gap mean must be positive");
    for (double m : response_means_)
        if (!(m > 0.0))
            throw std::invalid_argument("delay model: response time mean must be positive");
}

double ExponentialDelay::entry_gap(Rng& rng) const {
    return rng.exponential_mean(entry_mean_);
}

double ExponentialDelay::response_time(int arm, Rng& rng) const {
    return rng.exponential_mean(response_means_[arm]);
}

double delay_probability(double entry_mean, double response_mean, int ell) {
    if (!(entry_mean > 0.0 && response_mean > 0.0))
        throw std::invalid_argument("delay_probability: means must be positive");
    if (ell < 0) throw std::invalid_argument("delay_probability: ell must be >= 0");
    return std::pow(response_mean / (entry_mean + response_mean), ell);
}

ObservedView observed_view(const TrialState& state, int epoch_m) {
    const int n = state.n();
    if (epoch_m < 0 || epoch_m > n)
        throw std::invalid_argument("observed_view: epoch out of range");
    ObservedView view{Eigen::VectorXd::Zero(state.arms), Eigen::VectorXd::Zero(state.arms)};
    const bool complete = (epoch_m == n);
    const double horizon = complete ? 0.0 : state.entry_times[epoch_m];
    for (int j = 0; j < (complete ? n : epoch_m); ++j) {
        if (!complete && state.entry_times[j] + state.response_delays[j] > horizon) continue;
        view.count[state.assignments[j]] += 1.0;
        view.sum[state.assignments[j]] += state.responses[j];
    }
    return view;
}

}  // namespace rar
