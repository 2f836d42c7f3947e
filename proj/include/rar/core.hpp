#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "rar/models.hpp"
#include "rar/rng.hpp"

namespace rar {

class DelayModel;

/// Complete history of one sequential trial. Counts are derivable from the
/// assignments; they are stored for convenience and checked in tests.
struct TrialState {
    int arms = 0;
    std::vector<int> assignments;        // X_m, 0-based arm index
    std::vector<double> responses;       // xi_m, sampled at assignment time
    std::vector<double> entry_times;     // t_m, nondecreasing
    std::vector<double> response_delays; // r_m, 0 without a delay model
    std::vector<long long> counts;       // terminal N_{n,k}

    int n() const { return static_cast<int>(assignments.size()); }
    std::vector<long long> recompute_counts() const;
};

/// How estimator-driven designs get off the ground before there is data.
struct WarmStart {
    enum class Mode { restricted_block, fixed_guess, bayes_shrinkage };
    Mode mode = Mode::restricted_block;
    int m0 = 1;     // patients per arm in the opening permuted blocks
    Theta theta0;   // per-arm guess; empty = family default

    static WarmStart restricted_block(int m0 = 1) { return {Mode::restricted_block, m0, {}}; }
    static WarmStart fixed_guess(Theta theta0) {
        return {Mode::fixed_guess, 0, std::move(theta0)};
    }
    static WarmStart bayes_shrinkage() { return {Mode::bayes_shrinkage, 0, {}}; }
};

/// A sequential allocation rule. The engine asks for the probability vector
/// of the next assignment, then has the policy realize the assignment (urn
/// designs consume their own draws), and feeds responses back one by one as
/// the delay model reveals them.
class DesignPolicy {
public:
    virtual ~DesignPolicy() = default;
    virtual std::string id() const = 0;
    virtual int arms() const = 0;

    /// Marginal distribution of the next assignment given current state.
    virtual Eigen::VectorXd next_probabilities() = 0;

    /// Realize the assignment; must be distributed per `p`. The default draws
    /// from `p` directly; urn policies replay their internal draw process.
    virtual int assign(const Eigen::VectorXd& p, Rng& rng);

    /// Called for every assignment, including warm-start ones.
    virtual void on_assigned(int /*arm*/) {}

    /// A response revealed for a patient previously assigned to `arm`.
    virtual void observe(int arm, double outcome) = 0;

    /// Warm-start guess injection for estimator-backed policies.
    virtual void set_guess(const Theta& /*theta0*/) {}
};

/// Per-step hook for streaming metrics and traces.
class TrialObserver {
public:
    virtual ~TrialObserver() = default;
    virtual void on_step(int m, const Eigen::VectorXd& p, int arm) = 0;
};

/// Draws one arm from a validated probability vector.
int sample_arm(const Eigen::VectorXd& p, Rng& rng);

/// Validates p: componentwise in [0,1] and sum 1 within 1e-12.
void check_probability_vector(const Eigen::VectorXd& p);

/// Runs one trial of n patients. Responses are sampled from the response
/// stream at assignment time but revealed to the policy only when the delay
/// model says they are observed (never later than the next assignment when
/// there is no delay model). Identical seed and configuration replay the
/// identical history.
class TrialEngine {
public:
    TrialEngine(DesignPolicy& policy, const ResponseModel& model, int n,
                const WarmStart& warm, const DelayModel* delay, TrialStreams& streams);

    bool done() const { return m_ >= n_; }
    int step(TrialObserver* observer = nullptr);
    const TrialState& state() const { return state_; }
    TrialState take_state() { return std::move(state_); }

private:
    struct Pending {
        double reveal_time;
        int index;
        bool operator<(const Pending& o) const {
            return reveal_time > o.reveal_time ||
                   (reveal_time == o.reveal_time && index > o.index);
        }
    };

    void reveal_due(double now);

    DesignPolicy& policy_;
    const ResponseModel& model_;
    const DelayModel* delay_;
    TrialStreams& streams_;
    int n_;
    int m_ = 0;
    int warm_steps_ = 0;
    WarmStart warm_;
    TrialState state_;
    std::vector<Pending> pending_;  // heap
    std::vector<int> block_;        // current warm-start block permutation
    int block_pos_ = 0;
    double clock_ = 0.0;
};

TrialState run_trial(DesignPolicy& policy, const ResponseModel& model, int n,
                     const WarmStart& warm, const DelayModel* delay, TrialStreams& streams,
                     TrialObserver* observer = nullptr);

TrialState run_trial(DesignPolicy& policy, const ResponseModel& model, int n,
                     const WarmStart& warm, const DelayModel* delay, std::uint64_t seed,
                     std::uint64_t replication = 0, TrialObserver* observer = nullptr);

}  // namespace rar
