#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "rar/core.hpp"
#include "rar/targets.hpp"

namespace rar {

/// Streaming per-replication accumulator: correct-guess count for the
/// selection bias (guessing the arm with the largest allocation probability)
/// and the mean absolute deviation of the probabilities from the reference
/// allocation. Optionally captures the full probability trace.
class TraceMetrics final : public TrialObserver {
public:
    explicit TraceMetrics(Eigen::VectorXd rho_ref)
        : rho_ref_(std::move(rho_ref)) {}

    void on_step(int m, const Eigen::VectorXd& p, int arm) override;

    long long steps() const { return steps_; }
    double selection_bias() const { return static_cast<double>(hits_) / steps_; }
    double mlr() const { return mlr_sum_ / steps_; }

    std::vector<Eigen::VectorXd>* capture = nullptr;

private:
    Eigen::VectorXd rho_ref_;
    long long hits_ = 0;
    double mlr_sum_ = 0.0;
    long long steps_ = 0;
};

/// Selection bias of a recorded probability/assignment trace.
double selection_bias(const std::vector<Eigen::VectorXd>& probs,
                      const std::vector<int>& arms);

/// MLR_n of a recorded probability trace against a reference allocation.
double mlr(const std::vector<Eigen::VectorXd>& probs, const Eigen::VectorXd& rho);

struct WaldResult {
    double z = 0.0;
    bool reject = false;
};

/// Two-arm Wald test of equal treatment effects from terminal statistics,
/// binary or normal, two-sided at the given level. Raw sample estimates.
WaldResult wald_test(const Eigen::VectorXd& count, const Eigen::VectorXd& sum,
                     const Eigen::VectorXd& sumsq, Family family, double level = 0.05);

// Closed-form asymptotic variances of sqrt(n)(N_n1/n - rho1) for the binary
// two-arm designs sharing the urn allocation q2/(q1+q2).
double dl_variance_binary(double p1, double p2);
double rpw_variance(double p1, double p2);             // q1q2[5-2(q1+q2)] / ...
double rpw_variance_alternative(double p1, double p2);      // q1q2[3+2(p1+p2)] / ...
double seu_variance_binary(double p1, double p2);
double smlp_variance_binary(double p1, double p2);
double gdl_variance_binary(double p1, double p2);
double dbcd_variance_binary(double p1, double p2, double gamma);

enum class VarianceRegime { normal, infinite };

struct ReferenceVariance {
    Eigen::MatrixXd sigma;  // KxK; (0,0) is the arm-1 scalar for K=2
    VarianceRegime regime = VarianceRegime::normal;
};

struct ReferenceVarianceParams {
    double gamma = 2.0;
    double alpha = 0.5;
    bool rpw_use_alternative_form = false;  // primary closed form is the default oracle
};

/// Reference asymptotic variance matrix for a design id targeting `target`
/// at true theta. Known ids: rpw, dl, seu, gdl, smlp, dbcd, erade, serade.
/// RPW outside the finite-variance regime reports VarianceRegime::infinite.
ReferenceVariance reference_variance(const std::string& design_id,
                                     const TargetAllocation& target, const Theta& theta,
                                     const ReferenceVarianceParams& params = {});

/// Per-replication results. Merging concatenates in argument order, so
/// summaries aggregate associatively and reductions are order-independent
/// given the replication indexing.
struct ReplicationSummary {
    int arms = 0;
    long long n = 0;
    std::vector<Eigen::VectorXd> props;  // terminal N_n/n per replication
    std::vector<double> sb;
    std::vector<double> mlr;
    std::vector<double> failures;        // NaN when undefined for the family
    std::vector<double> wald_z;
    std::vector<std::uint8_t> reject;

    std::size_t replications() const { return props.size(); }
    void merge(const ReplicationSummary& other);

    Eigen::VectorXd mean_props() const;
    /// n * unbiased sample variance of the arm's terminal proportion.
    double scaled_variance(int arm) const;
    /// Jackknife standard error of scaled_variance over replications.
    double scaled_variance_se(int arm) const;
    double mean_sb() const;
    double mean_mlr() const;
    double reject_rate() const;
    double mean_failures() const;
};

}  // namespace rar
