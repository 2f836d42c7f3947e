#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "rar/rng.hpp"

namespace rar {

enum class Family { bernoulli, normal, exponential };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

/// Per-arm parameter vector. Layout by family:
///   bernoulli:   [p]
///   normal:      [mu, sigma2]
///   exponential: [rate]
using ArmTheta = Eigen::VectorXd;
using Theta = std::vector<ArmTheta>;

int family_param_dim(Family f);

/// Outcome distributions with true parameters for each arm.
struct ResponseModel {
    Family family = Family::bernoulli;
    Theta theta;

    int arms() const { return static_cast<int>(theta.size()); }
    int param_dim() const { return family_param_dim(family); }
    double sample(int arm, Rng& rng) const;
    void validate() const;

    static ResponseModel bernoulli(const std::vector<double>& p);
    static ResponseModel normal(const std::vector<double>& mu,
                                const std::vector<double>& sigma2);
    static ResponseModel exponential(const std::vector<double>& rate);
};

/// Fisher information for a single observation at an interior theta.
/// Throws std::invalid_argument on boundary parameters.
Eigen::MatrixXd fisher_information(Family family, const ArmTheta& theta);

struct EstimatorOptions {
    bool raw_mle = false;       // raw MLE instead of the shrunk default
    double sigma2_floor = 1e-8;
};

/// Per-arm running statistics of observed responses: count, sum, sum of
/// squares. Only revealed responses are ever added.
class EstimatorState {
public:
    EstimatorState() = default;
    explicit EstimatorState(int arms) : n_(arms, 0.0), s_(arms, 0.0), q_(arms, 0.0) {}

    void add(int arm, double x) {
        n_[arm] += 1.0;
        s_[arm] += x;
        q_[arm] += x * x;
    }

    int arms() const { return static_cast<int>(n_.size()); }
    double count(int arm) const { return n_[arm]; }
    double sum(int arm) const { return s_[arm]; }
    double sumsq(int arm) const { return q_[arm]; }

private:
    std::vector<double> n_, s_, q_;
};

/// Point estimate of one arm's parameters; arms with no observations return
/// the supplied guess. The default Bernoulli estimate is the add-half shrink
/// (S+1/2)/(N+1), which never touches {0,1}; sigma2 is floored.
ArmTheta estimate_arm(const EstimatorState& st, int arm, Family family,
                      const ArmTheta& guess, const EstimatorOptions& opt = {});

Theta estimate(const EstimatorState& st, Family family, const Theta& guess,
               const EstimatorOptions& opt = {});

/// Neutral starting guesses: bernoulli p=1/2, normal (0,1), exponential rate 1.
Theta default_guess(Family family, int arms);

}  // namespace rar
