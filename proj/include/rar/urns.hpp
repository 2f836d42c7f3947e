#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <optional>

#include "rar/core.hpp"
#include "rar/targets.hpp"

namespace rar {

/// Real-valued ball counts. Types with nonpositive counts have no chance to
/// be selected; draw probabilities are the proportions of positive counts.
struct UrnState {
    Eigen::VectorXd balls;        // treatment types
    double immigration = 0.0;     // immigration-type count
    bool has_immigration = false;

    double positive_treatment_mass() const {
        double s = 0.0;
        for (int i = 0; i < balls.size(); ++i) s += std::max(balls[i], 0.0);
        return s;
    }
    double positive_total_mass() const {
        return positive_treatment_mass() +
               (has_immigration ? std::max(immigration, 0.0) : 0.0);
    }
};

/// Ball increments applied to the treatment types when a patient's outcome on
/// `arm` is processed; the diagonal may be negative. Outcome-independent
/// rules apply at assignment time, outcome-dependent ones when the response
/// is revealed.
class AddingRule {
public:
    virtual ~AddingRule() = default;
    virtual int arms() const = 0;
    virtual bool outcome_dependent() const = 0;
    virtual Eigen::VectorXd increments(int arm, double outcome,
                                       const Theta& theta_hat) const = 0;
    /// Conditional-mean generating matrix H(theta) when defined.
    virtual std::optional<Eigen::MatrixXd> generating_matrix(const Theta&) const {
        return std::nullopt;
    }
};

/// Two-arm rule: success adds one ball of the drawn type, failure one ball of
/// the opposite type. H = [[p1,q1],[q2,p2]].
std::shared_ptr<AddingRule> rpw_rule();

/// K-arm extension: success adds one own-type ball, failure adds 1/(K-1)
/// balls of every other type. Stationary allocation is proportional to 1/q_k.
std::shared_ptr<AddingRule> wei_rule(int arms);

/// Estimate-adjusted rule: every draw adds beta*rho_j(theta_hat) balls of
/// each type j regardless of the drawn arm and outcome.
std::shared_ptr<AddingRule> seu_rule(std::shared_ptr<const TargetAllocation> target,
                                     double beta, double clamp_eps = 0.01);

/// Binary drop rule: failure removes the drawn-type ball, success returns it.
std::shared_ptr<AddingRule> failure_drop_rule(int arms);

/// Constant diagonal rule (value per draw on the drawn type only).
std::shared_ptr<AddingRule> const_diag_rule(int arms, double value);

/// Reinforcement rule: adds f(outcome) >= 0 balls of the drawn type only.
std::shared_ptr<AddingRule> reinforcement_rule(int arms,
                                               std::function<double(double)> f);

/// Draws one ball by positive-count proportions. Returns -1 for the
/// immigration type. Throws when no positive mass remains.
int draw_ball(const UrnState& urn, Rng& rng);

/// Marginal distribution of the next *assignment*, marginalizing immigration
/// redraws whose deterministic effect is to add `immigration_add` balls per
/// type. Without immigration this is just the positive-count proportions.
Eigen::VectorXd assignment_probabilities(const UrnState& urn,
                                         const Eigen::VectorXd* immigration_add,
                                         double tail_tol = 1e-14,
                                         long max_iterations = 1000000);

// Stepwise procedures with immediate outcomes, used directly in tests and by
// the policies below.

/// Draw, assign, sample outcome via `outcome_of`, apply the adding rule.
int gpu_step(UrnState& urn, const AddingRule& rule,
             const std::function<double(int)>& outcome_of, const Theta& theta_hat,
             Rng& rng);

struct UrnDraw {
    bool immigration = false;
    int arm = -1;
    double outcome = 0.0;
};

/// One drop-the-loser draw. Immigration returns the ball plus one ball of
/// each treatment type and assigns nobody; a treatment draw observes the
/// outcome and removes the ball on failure.
UrnDraw dl_step(UrnState& urn, const std::function<double(int)>& outcome_of, Rng& rng);

/// Immigrated-urn assignment: immigration draws add a_k(theta_hat) balls of
/// type k and loop; a treatment draw applies the adding rule row.
int imu_step(UrnState& urn, const std::function<Eigen::VectorXd(const Theta&)>& rates,
             const AddingRule& rule, const std::function<double(int)>& outcome_of,
             const Theta& theta_hat, Rng& rng, long max_iterations = 1000000);

/// Randomly reinforced urn: adds reinforcement(arm outcome) balls of the
/// drawn type only.
int rru_step(UrnState& urn, const std::function<double(double)>& reinforcement,
             const std::function<double(int)>& outcome_of, Rng& rng);

/// Dominant eigen-structure of a generating matrix, row-vector convention
/// v H = beta v with sum(v) = 1.
struct StationaryAllocation {
    double beta = 0.0;         // dominant eigenvalue
    Eigen::VectorXd v;         // stationary allocation
    double lambda = 0.0;       // max Re(subdominant)/beta
    int jordan_order = 1;      // largest Jordan block at the lambda eigenvalues
    bool simple_dominant = true;
    bool positive_stationary = true;
};

StationaryAllocation stationary_allocation(const Eigen::MatrixXd& H,
                                           double gap_tol = 1e-9);

/// Urn-driven design policy. Covers GPU rules (RPW, Wei, custom), SEU,
/// drop-the-loser, generalized drop-the-loser, the immigrated urn and the
/// randomly reinforced urn, all under the shared draw/observe contract.
class UrnPolicy final : public DesignPolicy {
public:
    UrnPolicy(std::string id, UrnState initial, std::shared_ptr<AddingRule> rule,
              std::function<Eigen::VectorXd(const Theta&)> immigration_rates,
              Family family, EstimatorOptions eopts = {});

    std::string id() const override { return id_; }
    int arms() const override { return static_cast<int>(urn_.balls.size()); }
    Eigen::VectorXd next_probabilities() override;
    int assign(const Eigen::VectorXd& p, Rng& rng) override;
    void on_assigned(int arm) override;
    void observe(int arm, double outcome) override;
    void set_guess(const Theta& theta0) override { guess_ = theta0; }

    const UrnState& urn() const { return urn_; }
    Theta theta_hat() const { return estimate(est_, family_, guess_, eopts_); }

private:
    std::string id_;
    UrnState urn_;
    std::shared_ptr<AddingRule> rule_;
    std::function<Eigen::VectorXd(const Theta&)> immigration_rates_;  // empty = none
    Family family_;
    EstimatorOptions eopts_;
    EstimatorState est_;
    Theta guess_;
    long max_loop_ = 1000000;
};

// Preset policies.
std::unique_ptr<UrnPolicy> make_rpw_policy(double y1 = 1.0, double y2 = 1.0);
std::unique_ptr<UrnPolicy> make_wei_policy(int arms, double balls_per_arm = 1.0);
std::unique_ptr<UrnPolicy> make_seu_policy(std::shared_ptr<const TargetAllocation> target,
                                           Family family, double beta = 1.0,
                                           double initial_balls = 1.0,
                                           EstimatorOptions eopts = {});
std::unique_ptr<UrnPolicy> make_dl_policy(int arms, double immigration = 1.0,
                                          double balls_per_arm = 1.0);
std::unique_ptr<UrnPolicy> make_gdl_policy(std::shared_ptr<const TargetAllocation> target,
                                           Family family, double beta = 1.0,
                                           double immigration = 1.0,
                                           double balls_per_arm = 1.0,
                                           EstimatorOptions eopts = {});
std::unique_ptr<UrnPolicy> make_rru_policy(int arms, double reinforce_on_success = 1.0,
                                           double balls_per_arm = 1.0);

}  // namespace rar
