#include "rar/urns.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace rar {

namespace {

class RpwRule final : public AddingRule {
public:
    int arms() const override { return 2; }
    bool outcome_dependent() const override { return true; }
    Eigen::VectorXd increments(int arm, double outcome, const Theta&) const override {
        Eigen::VectorXd d = Eigen::VectorXd::Zero(2);
        d[outcome > 0.5 ? arm : 1 - arm] = 1.0;
        return d;
    }
    std::optional<Eigen::MatrixXd> generating_matrix(const Theta& theta) const override {
        double p1 = theta[0][0], p2 = theta[1][0];
        Eigen::MatrixXd h(2, 2);
        h << p1, 1.0 - p1, 1.0 - p2, p2;
        return h;
    }
};

class WeiRule final : public AddingRule {
public:
    explicit WeiRule(int arms) : k_(arms) {
        if (arms < 2) throw std::invalid_argument("wei rule needs K >= 2");
    }
    int arms() const override { return k_; }
    bool outcome_dependent() const override { return true; }
    Eigen::VectorXd increments(int arm, double outcome, const Theta&) const override {
        Eigen::VectorXd d = Eigen::VectorXd::Zero(k_);
        if (outcome > 0.5) {
            d[arm] = 1.0;
        } else {
            d.setConstant(1.0 / (k_ - 1));
            d[arm] = 0.0;
        }
        return d;
    }
    std::optional<Eigen::MatrixXd> generating_matrix(const Theta& theta) const override {
        Eigen::MatrixXd h(k_, k_);
        for (int i = 0; i < k_; ++i) {
            double p = theta[i][0];
            for (int j = 0; j < k_; ++j) h(i, j) = (i == j) ? p : (1.0 - p) / (k_ - 1);
        }
        return h;
    }

private:
    int k_;
};

class SeuRule final : public AddingRule {
public:
    SeuRule(std::shared_ptr<const TargetAllocation> target, double beta, double eps)
        : target_(std::move(target)), beta_(beta), eps_(eps) {
        if (!(beta_ > 0.0)) throw std::invalid_argument("seu rule needs beta > 0");
    }
    int arms() const override { return target_->arms(); }
    bool outcome_dependent() const override { return false; }
    Eigen::VectorXd increments(int, double, const Theta& theta_hat) const override {
        return beta_ * clamp_simplex(target_->rho(theta_hat), eps_);
    }
    std::optional<Eigen::MatrixXd> generating_matrix(const Theta& theta) const override {
        Eigen::VectorXd r = clamp_simplex(target_->rho(theta), eps_);
        Eigen::MatrixXd h(r.size(), r.size());
        for (int i = 0; i < r.size(); ++i) h.row(i) = beta_ * r.transpose();
        return h;
    }

private:
    std::shared_ptr<const TargetAllocation> target_;
    double beta_, eps_;
};

class FailureDropRule final : public AddingRule {
public:
    explicit FailureDropRule(int arms) : k_(arms) {}
    int arms() const override { return k_; }
    bool outcome_dependent() const override { return true; }
    Eigen::VectorXd increments(int arm, double outcome, const Theta&) const override {
        Eigen::VectorXd d = Eigen::VectorXd::Zero(k_);
        if (outcome <= 0.5) d[arm] = -1.0;
        return d;
    }

private:
    int k_;
};

class ConstDiagRule final : public AddingRule {
public:
    ConstDiagRule(int arms, double value) : k_(arms), value_(value) {}
    int arms() const override { return k_; }
    bool outcome_dependent() const override { return false; }
    Eigen::VectorXd increments(int arm, double, const Theta&) const override {
        Eigen::VectorXd d = Eigen::VectorXd::Zero(k_);
        d[arm] = value_;
        return d;
    }

private:
    int k_;
    double value_;
};

class ReinforcementRule final : public AddingRule {
public:
    ReinforcementRule(int arms, std::function<double(double)> f)
        : k_(arms), f_(std::move(f)) {}
    int arms() const override { return k_; }
    bool outcome_dependent() const override { return true; }
    Eigen::VectorXd increments(int arm, double outcome, const Theta&) const override {
        double add = f_(outcome);
        if (add < 0.0)
            throw std::runtime_error("reinforcement must be nonnegative");
        Eigen::VectorXd d = Eigen::VectorXd::Zero(k_);
        d[arm] = add;
        return d;
    }

private:
    int k_;
    std::function<double(double)> f_;
};

}  // namespace

std::shared_ptr<AddingRule> rpw_rule() { return std::make_shared<RpwRule>(); }
std::shared_ptr<AddingRule> wei_rule(int arms) { return std::make_shared<WeiRule>(arms); }
std::shared_ptr<AddingRule> seu_rule(std::shared_ptr<const TargetAllocation> target,
                                     double beta, double clamp_eps) {
    return std::make_shared<SeuRule>(std::move(target), beta, clamp_eps);
}
std::shared_ptr<AddingRule> failure_drop_rule(int arms) {
    return std::make_shared<FailureDropRule>(arms);
}
std::shared_ptr<AddingRule> const_diag_rule(int arms, double value) {
    return std::make_shared<ConstDiagRule>(arms, value);
}
std::shared_ptr<AddingRule> reinforcement_rule(int arms, std::function<double(double)> f) {
    return std::make_shared<ReinforcementRule>(arms, std::move(f));
}

int draw_ball(const UrnState& urn, Rng& rng) {
    const int k = static_cast<int>(urn.balls.size());
    double total = urn.positive_total_mass();
    if (!(total > 0.0)) throw std::runtime_error("urn has no positive mass to draw from");
    double u = rng.uniform01() * total;
    if (urn.has_immigration && urn.immigration > 0.0) {
        if (u < urn.immigration) return -1;
        u -= urn.immigration;
    }
    double cum = 0.0;
    int last_positive = -1;
    for (int i = 0; i < k; ++i) {
        double w = std::max(urn.balls[i], 0.0);
        if (w > 0.0) last_positive = i;
        cum += w;
        if (u < cum) return i;
    }
    if (last_positive < 0) throw std::runtime_error("urn has no positive treatment mass");
    return last_positive;
}

Eigen::VectorXd assignment_probabilities(const UrnState& urn,
                                         const Eigen::VectorXd* immigration_add,
                                         double tail_tol, long max_iterations) {
    const int k = static_cast<int>(urn.balls.size());
    Eigen::VectorXd p = Eigen::VectorXd::Zero(k);
    Eigen::VectorXd balls = urn.balls;
    double imm = urn.has_immigration ? std::max(urn.immigration, 0.0) : 0.0;
    double prefix = 1.0;  // probability that all previous draws were immigration
    for (long it = 0; it < max_iterations; ++it) {
        double treat = 0.0;
        for (int i = 0; i < k; ++i) treat += std::max(balls[i], 0.0);
        double total = treat + imm;
        if (!(total > 0.0))
            throw std::runtime_error("urn has no positive mass to draw from");
        if (treat > 0.0)
            for (int i = 0; i < k; ++i)
                p[i] += prefix * std::max(balls[i], 0.0) / total;
        if (imm <= 0.0 || immigration_add == nullptr) {
            prefix = 0.0;
            break;
        }
        prefix *= imm / total;
        if (prefix < tail_tol) break;
        balls += *immigration_add;
    }
    double mass = p.sum();
    if (!(mass > 0.0))
        throw std::runtime_error("no treatment type can be drawn from the urn");
    return p / mass;
}

int gpu_step(UrnState& urn, const AddingRule& rule,
             const std::function<double(int)>& outcome_of, const Theta& theta_hat,
             Rng& rng) {
    int arm = draw_ball(urn, rng);
    if (arm < 0) throw std::logic_error("gpu_step on an urn with an immigration type");
    urn.balls += rule.increments(arm, outcome_of(arm), theta_hat);
    return arm;
}

UrnDraw dl_step(UrnState& urn, const std::function<double(int)>& outcome_of, Rng& rng) {
    if (!urn.has_immigration)
        throw std::invalid_argument("dl_step requires an immigration type");
    UrnDraw result;
    int drawn = draw_ball(urn, rng);
    if (drawn < 0) {
        result.immigration = true;
        urn.balls.array() += 1.0;
        return result;
    }
    result.arm = drawn;
    result.outcome = outcome_of(drawn);
    if (result.outcome <= 0.5) urn.balls[drawn] -= 1.0;
    return result;
}

int imu_step(UrnState& urn, const std::function<Eigen::VectorXd(const Theta&)>& rates,
             const AddingRule& rule, const std::function<double(int)>& outcome_of,
             const Theta& theta_hat, Rng& rng, long max_iterations) {
    for (long it = 0; it < max_iterations; ++it) {
        int drawn = draw_ball(urn, rng);
        if (drawn < 0) {
            urn.balls += rates(theta_hat);
            continue;
        }
        urn.balls += rule.increments(drawn, outcome_of(drawn), theta_hat);
        return drawn;
    }
    throw std::runtime_error("immigration loop exceeded the iteration cap");
}

int rru_step(UrnState& urn, const std::function<double(double)>& reinforcement,
             const std::function<double(int)>& outcome_of, Rng& rng) {
    int arm = draw_ball(urn, rng);
    if (arm < 0) throw std::logic_error("rru_step on an urn with an immigration type");
    double add = reinforcement(outcome_of(arm));
    if (add < 0.0) throw std::runtime_error("reinforcement must be nonnegative");
    urn.balls[arm] += add;
    return arm;
}

StationaryAllocation stationary_allocation(const Eigen::MatrixXd& H, double gap_tol) {
    const int k = static_cast<int>(H.rows());
    if (H.cols() != k || k < 1) throw std::invalid_argument("H must be square");
    StationaryAllocation out;

    Eigen::EigenSolver<Eigen::MatrixXd> solver(H);
    Eigen::VectorXcd ev = solver.eigenvalues();
    int dominant = 0;
    for (int i = 1; i < k; ++i)
        if (ev[i].real() > ev[dominant].real()) dominant = i;
    out.beta = ev[dominant].real();
    if (!(out.beta > 0.0))
        throw std::invalid_argument("generating matrix has no positive dominant eigenvalue");

    double sub = -std::numeric_limits<double>::infinity();
    bool used_dominant = false;
    for (int i = 0; i < k; ++i) {
        if (i == dominant) continue;
        sub = std::max(sub, ev[i].real());
        used_dominant = true;
    }
    out.simple_dominant = !(used_dominant && out.beta - sub < gap_tol);
    out.lambda = used_dominant ? sub / out.beta : 0.0;

    // Stationary row vector via power iteration on H^T; robust to repeated
    // dominant eigenvalues (e.g. scaled identity), where it keeps the uniform
    // starting direction.
    Eigen::VectorXd v = Eigen::VectorXd::Constant(k, 1.0 / k);
    for (int it = 0; it < 100000; ++it) {
        Eigen::VectorXd next = H.transpose() * v;
        double s = next.sum();
        if (!(std::abs(s) > 0.0)) break;
        next /= s;
        double diff = (next - v).lpNorm<Eigen::Infinity>();
        v = next;
        if (diff < 1e-14) break;
    }
    out.v = v;
    out.positive_stationary = (v.minCoeff() > 0.0);

    // Jordan order at the eigenvalues attaining lambda: defective within
    // tolerance is detected through the nullity sequence of (H - mu I)^j.
    out.jordan_order = 1;
    if (used_dominant) {
        const double cluster_tol = 1e-7 * std::max(1.0, H.norm());
        std::vector<bool> seen(k, false);
        for (int i = 0; i < k; ++i) {
            if (i == dominant || seen[i]) continue;
            if (std::abs(ev[i].real() / out.beta - out.lambda) > 1e-9) continue;
            std::vector<int> cluster;
            for (int j = 0; j < k; ++j) {
                if (j == dominant) continue;
                if (std::abs(ev[j] - ev[i]) < cluster_tol) {
                    cluster.push_back(j);
                    seen[j] = true;
                }
            }
            int mult = static_cast<int>(cluster.size());
            if (mult <= 1) continue;
            Eigen::MatrixXcd shifted =
                H.cast<std::complex<double>>() -
                ev[i] * Eigen::MatrixXcd::Identity(k, k);
            Eigen::MatrixXcd power = Eigen::MatrixXcd::Identity(k, k);
            for (int j = 1; j <= mult; ++j) {
                power = power * shifted;
                Eigen::JacobiSVD<Eigen::MatrixXcd> svd(power);
                double thresh = 1e-9 * std::max(1.0, svd.singularValues()[0]);
                int rank = 0;
                for (int s = 0; s < svd.singularValues().size(); ++s)
                    if (svd.singularValues()[s] > thresh) ++rank;
                if (k - rank >= mult) {
                    out.jordan_order = std::max(out.jordan_order, j);
                    break;
                }
                if (j == mult) out.jordan_order = std::max(out.jordan_order, mult);
            }
        }
    }
    return out;
}

UrnPolicy::UrnPolicy(std::string id, UrnState initial, std::shared_ptr<AddingRule> rule,
                     std::function<Eigen::VectorXd(const Theta&)> immigration_rates,
                     Family family, EstimatorOptions eopts)
    : id_(std::move(id)),
      urn_(std::move(initial)),
      rule_(std::move(rule)),
      immigration_rates_(std::move(immigration_rates)),
      family_(family),
      eopts_(eopts),
      est_(static_cast<int>(urn_.balls.size())),
      guess_(default_guess(family, static_cast<int>(urn_.balls.size()))) {
    if (rule_->arms() != arms())
        throw std::invalid_argument("urn policy: rule arm count mismatch");
    if (urn_.has_immigration && !immigration_rates_)
        throw std::invalid_argument("urn policy: immigration type without immigration rates");
    if (urn_.has_immigration && !(urn_.immigration > 0.0) &&
        !(urn_.positive_treatment_mass() > 0.0))
        throw std::invalid_argument("urn policy: empty urn with no immigration mass");
}

Eigen::VectorXd UrnPolicy::next_probabilities() {
    if (!urn_.has_immigration || !immigration_rates_)
        return assignment_probabilities(urn_, nullptr);
    Eigen::VectorXd add = immigration_rates_(theta_hat());
    return assignment_probabilities(urn_, &add);
}

int UrnPolicy::assign(const Eigen::VectorXd&, Rng& rng) {
    Theta th;
    bool have_theta = false;
    for (long it = 0; it < max_loop_; ++it) {
        int drawn = draw_ball(urn_, rng);
        if (drawn >= 0) return drawn;
        if (!immigration_rates_)
            throw std::runtime_error("immigration ball drawn without immigration rates");
        if (!have_theta) {
            th = theta_hat();
            have_theta = true;
        }
        urn_.balls += immigration_rates_(th);
    }
    throw std::runtime_error("immigration loop exceeded the iteration cap");
}

void UrnPolicy::on_assigned(int arm) {
    // Outcome-independent rules fire per assignment; this covers warm-start
    // block assignments the same way as drawn ones.
    if (!rule_->outcome_dependent())
        urn_.balls += rule_->increments(arm, 0.0, theta_hat());
}

void UrnPolicy::observe(int arm, double outcome) {
    est_.add(arm, outcome);
    if (rule_->outcome_dependent())
        urn_.balls += rule_->increments(arm, outcome, theta_hat());
}

std::unique_ptr<UrnPolicy> make_rpw_policy(double y1, double y2) {
    UrnState urn;
    urn.balls = Eigen::Vector2d(y1, y2);
    return std::make_unique<UrnPolicy>("rpw", urn, rpw_rule(), nullptr, Family::bernoulli);
}

std::unique_ptr<UrnPolicy> make_wei_policy(int arms, double balls_per_arm) {
    UrnState urn;
    urn.balls = Eigen::VectorXd::Constant(arms, balls_per_arm);
    return std::make_unique<UrnPolicy>("wei", urn, wei_rule(arms), nullptr,
                                       Family::bernoulli);
}

std::unique_ptr<UrnPolicy> make_seu_policy(std::shared_ptr<const TargetAllocation> target,
                                           Family family, double beta, double initial_balls,
                                           EstimatorOptions eopts) {
    const int k = target->arms();
    UrnState urn;
    urn.balls = Eigen::VectorXd::Constant(k, initial_balls);
    return std::make_unique<UrnPolicy>("seu", urn, seu_rule(std::move(target), beta),
                                       nullptr, family, eopts);
}

std::unique_ptr<UrnPolicy> make_dl_policy(int arms, double immigration,
                                          double balls_per_arm) {
    UrnState urn;
    urn.balls = Eigen::VectorXd::Constant(arms, balls_per_arm);
    urn.immigration = immigration;
    urn.has_immigration = true;
    auto ones = [arms](const Theta&) { return Eigen::VectorXd::Ones(arms); };
    return std::make_unique<UrnPolicy>("dl", urn, failure_drop_rule(arms), ones,
                                       Family::bernoulli);
}

std::unique_ptr<UrnPolicy> make_gdl_policy(std::shared_ptr<const TargetAllocation> target,
                                           Family family, double beta, double immigration,
                                           double balls_per_arm, EstimatorOptions eopts) {
    const int k = target->arms();
    UrnState urn;
    urn.balls = Eigen::VectorXd::Constant(k, balls_per_arm);
    urn.immigration = immigration;
    urn.has_immigration = true;
    auto rates = [target = std::move(target), beta](const Theta& th) {
        return (beta * clamp_simplex(target->rho(th), 0.01)).eval();
    };
    return std::make_unique<UrnPolicy>("gdl", urn, const_diag_rule(k, -1.0),
                                       std::move(rates), family, eopts);
}

std::unique_ptr<UrnPolicy> make_rru_policy(int arms, double reinforce_on_success,
                                           double balls_per_arm) {
    UrnState urn;
    urn.balls = Eigen::VectorXd::Constant(arms, balls_per_arm);
    auto f = [reinforce_on_success](double outcome) {
        return outcome > 0.5 ? reinforce_on_success : 0.0;
    };
    return std::make_unique<UrnPolicy>("rru", urn, reinforcement_rule(arms, f), nullptr,
                                       Family::bernoulli);
}

}  // namespace rar
