#include "rar/coins.hpp"

#include <cmath>
#include <stdexcept>

namespace rar {

Eigen::VectorXd dbcd_allocation(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                double gamma) {
    const int k = static_cast<int>(x.size());
    if (y.size() != k) throw std::invalid_argument("dbcd: dimension mismatch");
    if (gamma < 0.0) throw std::invalid_argument("dbcd: gamma must be >= 0");
    if (gamma == 0.0) return y / y.sum();
    // log-space weights; tolerant of extreme y/x ratios at large gamma
    Eigen::VectorXd logw(k);
    for (int i = 0; i < k; ++i) {
        if (!(x[i] > 0.0))
            throw std::invalid_argument("dbcd: zero sample proportion with gamma > 0");
        if (!(y[i] > 0.0)) throw std::invalid_argument("dbcd: target component must be > 0");
        logw[i] = std::log(y[i]) + gamma * (std::log(y[i]) - std::log(x[i]));
    }
    double lmax = logw.maxCoeff();
    Eigen::VectorXd w = (logw.array() - lmax).exp();
    return w / w.sum();
}

double erade_probability(double frac1, double rho1, double alpha, double tie_tol) {
    if (alpha < 0.0 || alpha > 1.0)
        throw std::invalid_argument("erade: alpha must be in [0,1]");
    double diff = frac1 - rho1;
    if (std::abs(diff) <= tie_tol) return rho1;
    return diff > 0.0 ? alpha * rho1 : 1.0 - alpha * (1.0 - rho1);
}

namespace {
double erade_weight(double t, double gamma) {
    double a = std::pow(t, 2.0 * gamma) - 1.0;
    return 1.0 + std::sqrt(a > 0.0 ? a : 0.0);
}
}  // namespace

Eigen::VectorXd smoothed_erade_allocation(const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& y, double gamma) {
    const int k = static_cast<int>(x.size());
    if (y.size() != k) throw std::invalid_argument("smoothed erade: dimension mismatch");
    if (gamma < 0.0) throw std::invalid_argument("smoothed erade: gamma must be >= 0");
    Eigen::VectorXd w(k);
    for (int i = 0; i < k; ++i) {
        if (!(x[i] > 0.0))
            throw std::invalid_argument("smoothed erade: zero sample proportion");
        w[i] = y[i] * erade_weight(y[i] / x[i], gamma);
    }
    return w / w.sum();
}

namespace {
double log_choose(long long n, long long k) {
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}
}  // namespace

double thompson_posterior(long long s1, long long s2, long long n1, long long n2) {
    if (s1 < 0 || s2 < 0 || s1 > n1 || s2 > n2)
        throw std::invalid_argument("thompson_posterior: need 0 <= S_k <= N_k");
    // Expand P(p1 > p2) = E_{p2}[P(p1 > p2 | p2)] with integer Beta
    // parameters: the survival function of p1 is a binomial tail, each
    // y-integral a Beta function, leaving binomial products over a combined
    // binomial. Every term is in [0,1]; log-gamma keeps large counts exact.
    const long long n = n1 + n2;
    const long long f2 = n2 - s2;
    const double log_denom = log_choose(n + 2, n1 + 1);
    double p = 0.0;
    for (long long a = 0; a <= s1; ++a)
        p += std::exp(log_choose(s2 + a, s2) + log_choose(f2 + n1 + 1 - a, f2) -
                      log_denom);
    if (p < 0.0) p = 0.0;
    if (p > 1.0) p = 1.0;
    return p;
}

double thall_wathen_probability(double p_hat, double c) {
    if (!(p_hat >= 0.0 && p_hat <= 1.0))
        throw std::invalid_argument("thall_wathen: posterior outside [0,1]");
    if (c < 0.0) throw std::invalid_argument("thall_wathen: c must be >= 0");
    if (c == 0.0) return 0.5;
    double a = std::pow(p_hat, c), b = std::pow(1.0 - p_hat, c);
    return a / (a + b);
}

EstimatorPolicy::EstimatorPolicy(std::shared_ptr<const TargetAllocation> target,
                                 Family family, EstimatorOptions eopts, double clamp_eps)
    : target_(std::move(target)),
      family_(family),
      eopts_(eopts),
      clamp_eps_(clamp_eps),
      est_(target_->arms()),
      guess_(default_guess(family, target_->arms())),
      counts_(target_->arms(), 0) {
    if (target_->family() != family)
        throw std::invalid_argument("target and model response family mismatch");
}

Eigen::VectorXd EstimatorPolicy::proportions() const {
    const int k = arms();
    if (total_ == 0)
        throw std::runtime_error("sample proportions requested before any assignment");
    Eigen::VectorXd x(k);
    for (int i = 0; i < k; ++i) {
        if (counts_[i] == 0)
            throw std::runtime_error(
                "sample proportion is zero for an arm; start the design with a "
                "restricted warm-up block");
        x[i] = static_cast<double>(counts_[i]) / static_cast<double>(total_);
    }
    return x;
}

DbcdPolicy::DbcdPolicy(std::shared_ptr<const TargetAllocation> target, Family family,
                       double gamma, EstimatorOptions eopts, double clamp_eps)
    : EstimatorPolicy(std::move(target), family, eopts, clamp_eps), gamma_(gamma) {
    if (gamma < 0.0) throw std::invalid_argument("dbcd: gamma must be >= 0");
}

Eigen::VectorXd DbcdPolicy::next_probabilities() {
    Eigen::VectorXd y = target_estimate();
    if (gamma_ == 0.0) return y;
    return dbcd_allocation(proportions(), y, gamma_);
}

EradePolicy::EradePolicy(std::shared_ptr<const TargetAllocation> target, Family family,
                         double alpha, EstimatorOptions eopts, double clamp_eps)
    : EstimatorPolicy(std::move(target), family, eopts, clamp_eps), alpha_(alpha) {
    if (arms() != 2) throw std::invalid_argument("erade: two-arm design");
    if (alpha < 0.0 || alpha > 1.0)
        throw std::invalid_argument("erade: alpha must be in [0,1]");
}

Eigen::VectorXd EradePolicy::next_probabilities() {
    Eigen::VectorXd y = target_estimate();
    double frac1 = total_ > 0 ? static_cast<double>(counts_[0]) / total_ : y[0];
    double p1 = erade_probability(frac1, y[0], alpha_);
    Eigen::VectorXd p(2);
    p << p1, 1.0 - p1;
    return p;
}

SmoothedEradePolicy::SmoothedEradePolicy(std::shared_ptr<const TargetAllocation> target,
                                         Family family, double gamma,
                                         EstimatorOptions eopts, double clamp_eps)
    : EstimatorPolicy(std::move(target), family, eopts, clamp_eps), gamma_(gamma) {
    if (gamma < 0.0) throw std::invalid_argument("smoothed erade: gamma must be >= 0");
}

Eigen::VectorXd SmoothedEradePolicy::next_probabilities() {
    return smoothed_erade_allocation(proportions(), target_estimate(), gamma_);
}

ThompsonPolicy::ThompsonPolicy(int horizon, double fixed_c)
    : horizon_(horizon), fixed_c_(fixed_c) {
    if (horizon < 1 && fixed_c < 0.0)
        throw std::invalid_argument("thompson: horizon required for the adaptive exponent");
}

Eigen::VectorXd ThompsonPolicy::next_probabilities() {
    double post = thompson_posterior(obs_s_[0], obs_s_[1], obs_n_[0], obs_n_[1]);
    double c = fixed_c_ >= 0.0
                   ? fixed_c_
                   : static_cast<double>(counts_[0] + counts_[1]) / (2.0 * horizon_);
    double p1 = thall_wathen_probability(post, c);
    Eigen::VectorXd p(2);
    p << p1, 1.0 - p1;
    return p;
}

CompleteRandomizationPolicy::CompleteRandomizationPolicy(int arms)
    : p_(Eigen::VectorXd::Constant(arms, 1.0 / arms)) {
    if (arms < 2) throw std::invalid_argument("complete randomization needs K >= 2");
}

CompleteRandomizationPolicy::CompleteRandomizationPolicy(Eigen::VectorXd p)
    : p_(std::move(p)) {
    check_probability_vector(p_);
}

Eigen::VectorXd PlayTheWinnerPolicy::next_probabilities() {
    Eigen::VectorXd p(2);
    if (!has_obs_) {
        p << 0.5, 0.5;
        return p;
    }
    int next = last_success_ ? last_arm_ : 1 - last_arm_;
    p.setZero();
    p[next] = 1.0;
    return p;
}

}  // namespace rar
