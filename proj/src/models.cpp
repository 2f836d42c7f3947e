#include "rar/models.hpp"

#include <cmath>
#include <stdexcept>

namespace rar {

std::string family_name(Family f) {
    switch (f) {
        case Family::bernoulli: return "bernoulli";
        case Family::normal: return "normal";
        case Family::exponential: return "exponential";
    }
    return "?";
}

Family family_from_name(const std::string& name) {
    if (name == "bernoulli") return Family::bernoulli;
    if (name == "normal") return Family::normal;
    if (name == "exponential") return Family::exponential;
    throw std::invalid_argument("unknown response family: " + name);
}

int family_param_dim(Family f) {
    return f == Family::normal ? 2 : 1;
}

double ResponseModel::sample(int arm, Rng& rng) const {
    const ArmTheta& t = theta[arm];
    switch (family) {
        case Family::bernoulli: return rng.bernoulli(t[0]) ? 1.0 : 0.0;
        case Family::normal: return rng.normal(t[0], std::sqrt(t[1]));
        case Family::exponential: return rng.exponential_mean(1.0 / t[0]);
    }
    throw std::logic_error("bad family");
}

void ResponseModel::validate() const {
    if (arms() < 2) throw std::invalid_argument("response model needs at least 2 arms");
    for (const ArmTheta& t : theta) {
        if (t.size() != param_dim()) throw std::invalid_argument("bad parameter dimension");
        switch (family) {
            case Family::bernoulli:
                if (!(t[0] > 0.0 && t[0] < 1.0) && t[0] != 0.0 && t[0] != 1.0)
                    throw std::invalid_argument("bernoulli p outside [0,1]");
                break;
            case Family::normal:
                if (!(t[1] > 0.0)) throw std::invalid_argument("normal sigma2 must be positive");
                break;
            case Family::exponential:
                if (!(t[0] > 0.0)) throw std::invalid_argument("exponential rate must be positive");
                break;
        }
    }
}

ResponseModel ResponseModel::bernoulli(const std::vector<double>& p) {
    ResponseModel m;
    m.family = Family::bernoulli;
    for (double v : p) m.theta.push_back(Eigen::VectorXd::Constant(1, v));
    return m;
}

ResponseModel ResponseModel::normal(const std::vector<double>& mu,
                                    const std::vector<double>& sigma2) {
    if (mu.size() != sigma2.size())
        throw std::invalid_argument("normal model: mu and sigma2 length mismatch");
    ResponseModel m;
    m.family = Family::normal;
    for (std::size_t k = 0; k < mu.size(); ++k) {
        Eigen::VectorXd t(2);
        t << mu[k], sigma2[k];
        m.theta.push_back(t);
    }
    return m;
}

ResponseModel ResponseModel::exponential(const std::vector<double>& rate) {
    ResponseModel m;
    m.family = Family::exponential;
    for (double v : rate) m.theta.push_back(Eigen::VectorXd::Constant(1, v));
    return m;
}

Eigen::MatrixXd fisher_information(Family family, const ArmTheta& theta) {
    switch (family) {
        case Family::bernoulli: {
            double p = theta[0];
            if (!(p > 0.0 && p < 1.0))
                throw std::invalid_argument("fisher_information: bernoulli p on boundary");
            Eigen::MatrixXd i(1, 1);
            i(0, 0) = 1.0 / (p * (1.0 - p));
            return i;
        }
        case Family::normal: {
            double s2 = theta[1];
            if (!(s2 > 0.0))
                throw std::invalid_argument("fisher_information: normal sigma2 on boundary");
            Eigen::MatrixXd i = Eigen::MatrixXd::Zero(2, 2);
            i(0, 0) = 1.0 / s2;
            i(1, 1) = 1.0 / (2.0 * s2 * s2);
            return i;
        }
        case Family::exponential: {
            double r = theta[0];
            if (!(r > 0.0))
                throw std::invalid_argument("fisher_information: exponential rate on boundary");
            Eigen::MatrixXd i(1, 1);
            i(0, 0) = 1.0 / (r * r);
            return i;
        }
    }
    throw std::logic_error("bad family");
}

ArmTheta estimate_arm(const EstimatorState& st, int arm, Family family,
                      const ArmTheta& guess, const EstimatorOptions& opt) {
    double n = st.count(arm);
    if (n <= 0.0) return guess;
    double s = st.sum(arm);
    switch (family) {
        case Family::bernoulli: {
            double p = opt.raw_mle ? s / n : (s + 0.5) / (n + 1.0);
            return Eigen::VectorXd::Constant(1, p);
        }
        case Family::normal: {
            double mu = s / n;
            double v = st.sumsq(arm) / n - mu * mu;
            if (v < opt.sigma2_floor) v = opt.sigma2_floor;
            Eigen::VectorXd t(2);
            t << mu, v;
            return t;
        }
        case Family::exponential: {
            if (s <= 0.0) return guess;
            return Eigen::VectorXd::Constant(1, n / s);
        }
    }
    throw std::logic_error("bad family");
}

Theta estimate(const EstimatorState& st, Family family, const Theta& guess,
               const EstimatorOptions& opt) {
    Theta out;
    out.reserve(st.arms());
    for (int k = 0; k < st.arms(); ++k)
        out.push_back(estimate_arm(st, k, family, guess[k], opt));
    return out;
}

Theta default_guess(Family family, int arms) {
    Theta g;
    for (int k = 0; k < arms; ++k) {
        switch (family) {
            case Family::bernoulli: g.push_back(Eigen::VectorXd::Constant(1, 0.5)); break;
            case Family::normal: {
                Eigen::VectorXd t(2);
                t << 0.0, 1.0;
                g.push_back(t);
                break;
            }
            case Family::exponential: g.push_back(Eigen::VectorXd::Constant(1, 1.0)); break;
        }
    }
    return g;
}

}  // namespace rar
