#include "rar/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace rar {

void TraceMetrics::on_step(int, const Eigen::VectorXd& p, int arm) {
    int guess = 0;
    for (int i = 1; i < p.size(); ++i)
        if (p[i] > p[guess]) guess = i;
    if (guess == arm) ++hits_;
    double dev = 0.0;
    for (int i = 0; i < p.size(); ++i) dev += std::abs(p[i] - rho_ref_[i]);
    mlr_sum_ += dev / p.size();
    ++steps_;
    if (capture) capture->push_back(p);
}

double selection_bias(const std::vector<Eigen::VectorXd>& probs,
                      const std::vector<int>& arms) {
    if (probs.empty() || probs.size() != arms.size())
        throw std::invalid_argument("selection_bias: empty or mismatched trace");
    long long hits = 0;
    for (std::size_t m = 0; m < probs.size(); ++m) {
        int guess = 0;
        for (int i = 1; i < probs[m].size(); ++i)
            if (probs[m][i] > probs[m][guess]) guess = i;
        if (guess == arms[m]) ++hits;
    }
    return static_cast<double>(hits) / probs.size();
}

double mlr(const std::vector<Eigen::VectorXd>& probs, const Eigen::VectorXd& rho) {
    if (probs.empty()) throw std::invalid_argument("mlr: empty trace");
    double total = 0.0;
    for (const Eigen::VectorXd& p : probs) {
        double dev = 0.0;
        for (int i = 0; i < p.size(); ++i) dev += std::abs(p[i] - rho[i]);
        total += dev / p.size();
    }
    return total / probs.size();
}

WaldResult wald_test(const Eigen::VectorXd& count, const Eigen::VectorXd& sum,
                     const Eigen::VectorXd& sumsq, Family family, double level) {
    if (count.size() != 2) throw std::invalid_argument("wald_test: two-arm test");
    if (count[0] < 1.0 || count[1] < 1.0)
        throw std::invalid_argument("wald_test: undefined with an empty arm");
    double m1 = sum[0] / count[0], m2 = sum[1] / count[1];
    double v1, v2;
    if (family == Family::bernoulli) {
        v1 = m1 * (1.0 - m1);
        v2 = m2 * (1.0 - m2);
    } else {
        v1 = sumsq[0] / count[0] - m1 * m1;
        v2 = sumsq[1] / count[1] - m2 * m2;
    }
    double denom = std::sqrt(v1 / count[0] + v2 / count[1]);
    WaldResult out;
    double num = m1 - m2;
    if (denom > 0.0)
        out.z = num / denom;
    else
        out.z = num == 0.0 ? 0.0
                           : std::copysign(std::numeric_limits<double>::infinity(), num);
    // two-sided normal critical value by bisection on the tail probability
    double lo = 0.0, hi = 10.0;
    for (int i = 0; i < 100; ++i) {
        double mid = 0.5 * (lo + hi);
        if (std::erfc(mid * 0.7071067811865475244) > level)
            lo = mid;
        else
            hi = mid;
    }
    out.reject = std::abs(out.z) > 0.5 * (lo + hi);
    return out;
}

namespace {
void check_binary_pair(double p1, double p2) {
    if (!(p1 > 0.0 && p1 < 1.0 && p2 > 0.0 && p2 < 1.0))
        throw std::invalid_argument("binary design variance requires p in (0,1)");
}
}  // namespace

double dl_variance_binary(double p1, double p2) {
    check_binary_pair(p1, p2);
    double q1 = 1.0 - p1, q2 = 1.0 - p2, s = q1 + q2;
    return q1 * q2 * (p1 + p2) / (s * s * s);
}

double rpw_variance(double p1, double p2) {
    check_binary_pair(p1, p2);
    double q1 = 1.0 - p1, q2 = 1.0 - p2, s = q1 + q2;
    return q1 * q2 * (5.0 - 2.0 * s) / ((2.0 * s - 1.0) * s * s);
}

double rpw_variance_alternative(double p1, double p2) {
    check_binary_pair(p1, p2);
    double q1 = 1.0 - p1, q2 = 1.0 - p2, s = q1 + q2;
    return q1 * q2 * (3.0 + 2.0 * (p1 + p2)) / ((2.0 * s - 1.0) * s * s);
}

double seu_variance_binary(double p1, double p2) {
    check_binary_pair(p1, p2);
    double q1 = 1.0 - p1, q2 = 1.0 - p2, s = q1 + q2;
    return q1 * q2 * (2.0 + 5.0 * (p1 + p2)) / (s * s * s);
}

double smlp_variance_binary(double p1, double p2) {
    check_binary_pair(p1, p2);
    double q1 = 1.0 - p1, q2 = 1.0 - p2, s = q1 + q2;
    return q1 * q2 * (2.0 + (p1 + p2)) / (s * s * s);
}

double gdl_variance_binary(double p1, double p2) {
    return 2.0 * dl_variance_binary(p1, p2);
}

double dbcd_variance_binary(double p1, double p2, double gamma) {
    check_binary_pair(p1, p2);
    double q1 = 1.0 - p1, q2 = 1.0 - p2, s = q1 + q2;
    return q1 * q2 * (2.0 + (1.0 + 2.0 * gamma) * (p1 + p2)) /
           ((1.0 + 2.0 * gamma) * s * s * s);
}

ReferenceVariance reference_variance(const std::string& design_id,
                                     const TargetAllocation& target, const Theta& theta,
                                     const ReferenceVarianceParams& params) {
    const int k = target.arms();
    Eigen::VectorXd rho = target.rho(theta);
    Eigen::MatrixXd sigma1 =
        Eigen::MatrixXd(rho.asDiagonal()) - rho * rho.transpose();
    ReferenceVariance out;
    out.sigma = Eigen::MatrixXd::Zero(k, k);

    auto lb = [&]() { return sigma_lb(target, theta); };

    if (design_id == "rpw") {
        if (k != 2 || target.id() != "urn")
            throw std::invalid_argument("rpw variance defined for the two-arm urn target");
        double p1 = theta[0][0], p2 = theta[1][0];
        if (p1 + p2 >= 1.5) {
            out.regime = VarianceRegime::infinite;
            out.sigma.setConstant(std::numeric_limits<double>::infinity());
            return out;
        }
        double v = params.rpw_use_alternative_form ? rpw_variance_alternative(p1, p2)
                                             : rpw_variance(p1, p2);
        out.sigma << v, -v, -v, v;
        return out;
    }
    if (design_id == "dl") {
        if (target.id() != "urn")
            throw std::invalid_argument("dl variance defined for the urn target");
        // (I - v'1) diag(v_k p_k / q_k) (I - 1'v)
        Eigen::VectorXd q(k);
        for (int i = 0; i < k; ++i) q[i] = 1.0 - theta[i][0];
        Eigen::VectorXd v = urn_target(q);
        Eigen::MatrixXd center = Eigen::MatrixXd::Identity(k, k) -
                                 v * Eigen::RowVectorXd::Ones(k);
        Eigen::VectorXd d(k);
        for (int i = 0; i < k; ++i) d[i] = v[i] * theta[i][0] / q[i];
        out.sigma = center * d.asDiagonal() * center.transpose();
        return out;
    }
    if (design_id == "seu") {
        out.sigma = sigma1 + 6.0 * lb();
        return out;
    }
    if (design_id == "gdl") {
        out.sigma = 2.0 * lb();
        return out;
    }
    if (design_id == "smlp") {
        out.sigma = sigma1 + 2.0 * lb();
        return out;
    }
    if (design_id == "dbcd") {
        Eigen::MatrixXd slb = lb();
        out.sigma = slb + (sigma1 + slb) / (1.0 + 2.0 * params.gamma);
        return out;
    }
    if (design_id == "erade" || design_id == "serade") {
        out.sigma = lb();
        return out;
    }
    throw std::invalid_argument("no reference variance for design: " + design_id);
}

void ReplicationSummary::merge(const ReplicationSummary& other) {
    if (replications() == 0) {
        *this = other;
        return;
    }
    if (other.replications() == 0) return;
    if (arms != other.arms || n != other.n)
        throw std::invalid_argument("summary merge: incompatible configurations");
    props.insert(props.end(), other.props.begin(), other.props.end());
    sb.insert(sb.end(), other.sb.begin(), other.sb.end());
    mlr.insert(mlr.end(), other.mlr.begin(), other.mlr.end());
    failures.insert(failures.end(), other.failures.begin(), other.failures.end());
    wald_z.insert(wald_z.end(), other.wald_z.begin(), other.wald_z.end());
    reject.insert(reject.end(), other.reject.begin(), other.reject.end());
}

Eigen::VectorXd ReplicationSummary::mean_props() const {
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(arms);
    for (const Eigen::VectorXd& p : props) mean += p;
    return mean / static_cast<double>(props.size());
}

double ReplicationSummary::scaled_variance(int arm) const {
    const std::size_t r = props.size();
    if (r < 2) throw std::invalid_argument("scaled variance needs >= 2 replications");
    double s1 = 0.0, s2 = 0.0;
    for (const Eigen::VectorXd& p : props) {
        s1 += p[arm];
        s2 += p[arm] * p[arm];
    }
    double var = (s2 - s1 * s1 / r) / (r - 1);
    return static_cast<double>(n) * var;
}

double ReplicationSummary::scaled_variance_se(int arm) const {
    const std::size_t r = props.size();
    if (r < 3) return std::numeric_limits<double>::quiet_NaN();
    double s1 = 0.0, s2 = 0.0;
    for (const Eigen::VectorXd& p : props) {
        s1 += p[arm];
        s2 += p[arm] * p[arm];
    }
    // leave-one-out values of the scaled variance
    std::vector<double> loo(r);
    double mean_loo = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
        double x = props[i][arm];
        double s1i = s1 - x, s2i = s2 - x * x;
        double vari = (s2i - s1i * s1i / (r - 1)) / (r - 2);
        loo[i] = static_cast<double>(n) * vari;
        mean_loo += loo[i];
    }
    mean_loo /= r;
    double ss = 0.0;
    for (double v : loo) ss += (v - mean_loo) * (v - mean_loo);
    return std::sqrt(ss * (r - 1) / r);
}

namespace {
double vec_mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / v.size();
}
}  // namespace

double ReplicationSummary::mean_sb() const { return vec_mean(sb); }
double ReplicationSummary::mean_mlr() const { return vec_mean(mlr); }

double ReplicationSummary::reject_rate() const {
    double s = 0.0;
    for (std::uint8_t b : reject) s += b;
    return s / reject.size();
}

double ReplicationSummary::mean_failures() const { return vec_mean(failures); }

}  // namespace rar
