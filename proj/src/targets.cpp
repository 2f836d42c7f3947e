#include "rar/targets.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rar {

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

Eigen::VectorXd clamp_simplex(Eigen::VectorXd rho, double eps) {
    const int k = static_cast<int>(rho.size());
    if (eps < 0.0 || eps * k > 1.0)
        throw std::invalid_argument("clamp_simplex: eps outside [0, 1/K]");
    for (int round = 0; round < k; ++round) {
        double fixed_mass = 0.0, free_mass = 0.0;
        int n_low = 0;
        for (int i = 0; i < k; ++i) {
            if (rho[i] < eps) {
                ++n_low;
                fixed_mass += eps;
            } else {
                free_mass += rho[i];
            }
        }
        if (n_low == 0) break;
        double scale = (1.0 - fixed_mass) / free_mass;
        bool again = false;
        for (int i = 0; i < k; ++i) {
            if (rho[i] < eps) {
                rho[i] = eps;
            } else {
                rho[i] *= scale;
                if (rho[i] < eps) again = true;
            }
        }
        if (!again) break;
    }
    return rho;
}

Eigen::MatrixXd TargetAllocation::fd_gradient(const Theta& theta, double step) const {
    const int k = arms();
    const int d = family_param_dim(family());
    Eigen::MatrixXd jac(d * k, k);
    Theta t = theta;
    for (int a = 0; a < k; ++a) {
        for (int j = 0; j < d; ++j) {
            double base = t[a][j];
            double h = step * std::max(1.0, std::abs(base));
            t[a][j] = base + h;
            Eigen::VectorXd up = rho(t);
            t[a][j] = base - h;
            Eigen::VectorXd dn = rho(t);
            t[a][j] = base;
            jac.row(a * d + j) = ((up - dn) / (2.0 * h)).transpose();
        }
    }
    return jac;
}

double neyman_target_sd(double sd1, double sd2) {
    if (!(sd1 > 0.0 && sd2 > 0.0))
        throw std::invalid_argument("neyman target requires positive standard deviations");
    return sd1 / (sd1 + sd2);
}

double neyman_target_binary(double p1, double p2) {
    if (!(p1 > 0.0 && p1 < 1.0 && p2 > 0.0 && p2 < 1.0))
        throw std::invalid_argument("neyman binary target requires p in (0,1)");
    double a = std::sqrt(p1 * (1.0 - p1)), b = std::sqrt(p2 * (1.0 - p2));
    return a / (a + b);
}

double rsihr_target(double p1, double p2) {
    if (!(p1 > 0.0 && p1 < 1.0 && p2 > 0.0 && p2 < 1.0))
        throw std::invalid_argument("rsihr target requires p in (0,1)");
    double a = std::sqrt(p1), b = std::sqrt(p2);
    return a / (a + b);
}

double zr_normal_target(double mu1, double mu2, double sd1, double sd2) {
    if (!(mu1 > 0.0 && mu2 > 0.0))
        throw std::invalid_argument("zr target requires positive means");
    if (!(sd1 > 0.0 && sd2 > 0.0))
        throw std::invalid_argument("zr target requires positive standard deviations");
    double a = std::sqrt(mu2) * sd1, b = std::sqrt(mu1) * sd2;
    return a / (a + b);
}

double bm_target(double mu1, double mu2, double sd1, double sd2, double c, bool symmetric) {
    if (!(sd1 > 0.0 && sd2 > 0.0))
        throw std::invalid_argument("bm target requires positive standard deviations");
    double phi1 = std::sqrt(normal_cdf((mu1 - c) / sd1));
    double phi2 = std::sqrt(normal_cdf((mu2 - c) / sd2));
    double den2 = symmetric ? phi1 * sd2 : phi1 * sd1;
    return phi2 * sd1 / (phi2 * sd1 + den2);
}

double lagrange_two_arm(double u, double v, double sd1, double sd2) {
    if (!(u > 0.0 && v > 0.0))
        throw std::invalid_argument("lagrange_two_arm requires positive cost weights");
    double a = sd1 / std::sqrt(u), b = sd2 / std::sqrt(v);
    return a / (a + b);
}

Eigen::VectorXd urn_target(const Eigen::VectorXd& q) {
    for (int i = 0; i < q.size(); ++i)
        if (!(q[i] > 0.0 && q[i] < 1.0))
            throw std::invalid_argument("urn target requires failure rates in (0,1)");
    Eigen::VectorXd inv = q.cwiseInverse();
    return inv / inv.sum();
}

namespace {

class UrnTargetK final : public TargetAllocation {
public:
    explicit UrnTargetK(int arms) : k_(arms) {}
    std::string id() const override { return "urn"; }
    int arms() const override { return k_; }
    Family family() const override { return Family::bernoulli; }

    Eigen::VectorXd rho(const Theta& theta) const override {
        Eigen::VectorXd q(k_);
        for (int i = 0; i < k_; ++i) q[i] = 1.0 - theta[i][0];
        return urn_target(q);
    }

    Eigen::MatrixXd gradient(const Theta& theta) const override {
        Eigen::VectorXd q(k_);
        for (int i = 0; i < k_; ++i) q[i] = 1.0 - theta[i][0];
        double t = q.cwiseInverse().sum();
        Eigen::MatrixXd jac(k_, k_);
        for (int a = 0; a < k_; ++a)
            for (int c = 0; c < k_; ++c) {
                double dq = (a == c ? -t / (q[c] * q[c]) : 0.0) + 1.0 / (q[c] * q[a] * q[a]);
                jac(a, c) = -dq / (t * t);  // d/dp = -d/dq
            }
        return jac;
    }

private:
    int k_;
};

class NeymanTarget final : public TargetAllocation {
public:
    explicit NeymanTarget(Family f) : family_(f) {
        if (f == Family::exponential)
            throw std::invalid_argument("neyman target supports bernoulli and normal only");
    }
    std::string id() const override { return "neyman"; }
    int arms() const override { return 2; }
    Family family() const override { return family_; }

    Eigen::VectorXd rho(const Theta& theta) const override {
        double r1;
        if (family_ == Family::bernoulli)
            r1 = neyman_target_binary(theta[0][0], theta[1][0]);
        else
            r1 = neyman_target_sd(std::sqrt(theta[0][1]), std::sqrt(theta[1][1]));
        Eigen::VectorXd r(2);
        r << r1, 1.0 - r1;
        return r;
    }

    Eigen::MatrixXd gradient(const Theta& theta) const override {
        if (family_ == Family::bernoulli) {
            double p1 = theta[0][0], p2 = theta[1][0];
            double a = std::sqrt(p1 * (1.0 - p1)), b = std::sqrt(p2 * (1.0 - p2));
            double s2 = (a + b) * (a + b);
            Eigen::MatrixXd jac(2, 2);
            jac(0, 0) = b * (1.0 - 2.0 * p1) / (2.0 * a * s2);
            jac(1, 0) = -a * (1.0 - 2.0 * p2) / (2.0 * b * s2);
            jac(0, 1) = -jac(0, 0);
            jac(1, 1) = -jac(1, 0);
            return jac;
        }
        double s1 = std::sqrt(theta[0][1]), s2 = std::sqrt(theta[1][1]);
        double sum2 = (s1 + s2) * (s1 + s2);
        Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(4, 2);
        jac(1, 0) = (s2 / sum2) / (2.0 * s1);   // d rho1 / d sigma2_1
        jac(3, 0) = -(s1 / sum2) / (2.0 * s2);  // d rho1 / d sigma2_2
        jac(1, 1) = -jac(1, 0);
        jac(3, 1) = -jac(3, 0);
        return jac;
    }

private:
    Family family_;
};

class RsihrTarget final : public TargetAllocation {
public:
    std::string id() const override { return "rsihr"; }
    int arms() const override { return 2; }
    Family family() const override { return Family::bernoulli; }

    Eigen::VectorXd rho(const Theta& theta) const override {
        double r1 = rsihr_target(theta[0][0], theta[1][0]);
        Eigen::VectorXd r(2);
        r << r1, 1.0 - r1;
        return r;
    }

    Eigen::MatrixXd gradient(const Theta& theta) const override {
        double a = std::sqrt(theta[0][0]), b = std::sqrt(theta[1][0]);
        double s2 = (a + b) * (a + b);
        Eigen::MatrixXd jac(2, 2);
        jac(0, 0) = b / (2.0 * a * s2);
        jac(1, 0) = -a / (2.0 * b * s2);
        jac(0, 1) = -jac(0, 0);
        jac(1, 1) = -jac(1, 0);
        return jac;
    }
};

class ZrNormalTarget final : public TargetAllocation {
public:
    std::string id() const override { return "zr"; }
    int arms() const override { return 2; }
    Family family() const override { return Family::normal; }

    Eigen::VectorXd rho(const Theta& theta) const override {
        double r1 = zr_normal_target(theta[0][0], theta[1][0], std::sqrt(theta[0][1]),
                                     std::sqrt(theta[1][1]));
        Eigen::VectorXd r(2);
        r << r1, 1.0 - r1;
        return r;
    }

    Eigen::MatrixXd gradient(const Theta& theta) const override {
        double mu1 = theta[0][0], mu2 = theta[1][0];
        double s1 = std::sqrt(theta[0][1]), s2 = std::sqrt(theta[1][1]);
        double a = std::sqrt(mu2) * s1, b = std::sqrt(mu1) * s2;
        double sum2 = (a + b) * (a + b);
        // rho1 = a/(a+b): d rho1 = (da*b - a*db)/(a+b)^2
        Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(4, 2);
        double db_dmu1 = s2 / (2.0 * std::sqrt(mu1));
        double da_dmu2 = s1 / (2.0 * std::sqrt(mu2));
        double da_ds21 = std::sqrt(mu2) / (2.0 * s1);
        double db_ds22 = std::sqrt(mu1) / (2.0 * s2);
        jac(0, 0) = -a * db_dmu1 / sum2;  // d rho1 / d mu1
        jac(1, 0) = b * da_ds21 / sum2;   // d rho1 / d sigma2_1
        jac(2, 0) = b * da_dmu2 / sum2;   // d rho1 / d mu2
        jac(3, 0) = -a * db_ds22 / sum2;  // d rho1 / d sigma2_2
        jac.col(1) = -jac.col(0);
        return jac;
    }
};

class BmTarget final : public TargetAllocation {
public:
    BmTarget(double c, bool symmetric) : c_(c), symmetric_(symmetric) {}
    std::string id() const override { return "bm"; }
    int arms() const override { return 2; }
    Family family() const override { return Family::normal; }

    Eigen::VectorXd rho(const Theta& theta) const override {
        double r1 = bm_target(theta[0][0], theta[1][0], std::sqrt(theta[0][1]),
                              std::sqrt(theta[1][1]), c_, symmetric_);
        Eigen::VectorXd r(2);
        r << r1, 1.0 - r1;
        return r;
    }

private:
    double c_;
    bool symmetric_;
};

class FixedTarget final : public TargetAllocation {
public:
    FixedTarget(Eigen::VectorXd rho, Family f) : rho_(std::move(rho)), family_(f) {
        double s = rho_.sum();
        if (std::abs(s - 1.0) > 1e-9 || rho_.minCoeff() < 0.0)
            throw std::invalid_argument("fixed target must be a probability vector");
        rho_ /= s;
    }
    std::string id() const override { return "fixed"; }
    int arms() const override { return static_cast<int>(rho_.size()); }
    Family family() const override { return family_; }
    Eigen::VectorXd rho(const Theta&) const override { return rho_; }
    Eigen::MatrixXd gradient(const Theta&) const override {
        return Eigen::MatrixXd::Zero(family_param_dim(family_) * arms(), arms());
    }

private:
    Eigen::VectorXd rho_;
    Family family_;
};

}  // namespace

std::shared_ptr<TargetAllocation> make_urn_target(int arms) {
    return std::make_shared<UrnTargetK>(arms);
}
std::shared_ptr<TargetAllocation> make_neyman_target(Family family) {
    return std::make_shared<NeymanTarget>(family);
}
std::shared_ptr<TargetAllocation> make_rsihr_target() {
    return std::make_shared<RsihrTarget>();
}
std::shared_ptr<TargetAllocation> make_zr_normal_target() {
    return std::make_shared<ZrNormalTarget>();
}
std::shared_ptr<TargetAllocation> make_bm_target(double c, bool symmetric) {
    return std::make_shared<BmTarget>(c, symmetric);
}
std::shared_ptr<TargetAllocation> make_fixed_target(const Eigen::VectorXd& rho, Family family) {
    return std::make_shared<FixedTarget>(rho, family);
}

Eigen::MatrixXd sigma_lb(const TargetAllocation& target, const Theta& theta) {
    const int k = target.arms();
    const int d = family_param_dim(target.family());
    Eigen::VectorXd r = target.rho(theta);
    for (int i = 0; i < k; ++i)
        if (!(r[i] > 0.0))
            throw std::invalid_argument("sigma_lb requires strictly positive target components");
    Eigen::MatrixXd jac = target.gradient(theta);
    Eigen::MatrixXd mid = Eigen::MatrixXd::Zero(d * k, d * k);
    for (int a = 0; a < k; ++a) {
        Eigen::MatrixXd info = fisher_information(target.family(), theta[a]);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(info);
        if (!lu.isInvertible())
            throw std::invalid_argument("sigma_lb: singular Fisher information");
        mid.block(a * d, a * d, d, d) = lu.inverse() / r[a];
    }
    return jac.transpose() * mid * jac;
}

namespace {

// Euclidean projection onto { x >= 0, sum x = z } (Duchi et al. style sort-based).
Eigen::VectorXd project_simplex(Eigen::VectorXd x, double z) {
    const int k = static_cast<int>(x.size());
    std::vector<double> u(x.data(), x.data() + k);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cssv = 0.0, theta = 0.0;
    int rho = 0;
    for (int i = 0; i < k; ++i) {
        cssv += u[i];
        double t = (cssv - z) / (i + 1);
        if (u[i] - t > 0) {
            rho = i + 1;
            theta = t;
        }
    }
    (void)rho;
    for (int i = 0; i < k; ++i) x[i] = std::max(x[i] - theta, 0.0);
    return x;
}

Eigen::VectorXd project_floored_simplex(const Eigen::VectorXd& x, double floor_b) {
    const int k = static_cast<int>(x.size());
    double slack = 1.0 - floor_b * k;
    Eigen::VectorXd shifted = x.array() - floor_b;
    return project_simplex(shifted, slack).array() + floor_b;
}

}  // namespace

Eigen::VectorXd optimal_allocation_multiarm(const AllocationProgram& prog, int max_iter,
                                            double tol) {
    const int k = static_cast<int>(prog.weights.size());
    if (k < 2) throw std::invalid_argument("allocation program needs at least 2 arms");
    if (prog.weights.minCoeff() <= 0.0)
        throw std::invalid_argument("allocation program weights must be positive");
    if (prog.floor_B < 0.0 || prog.floor_B * k > 1.0 + 1e-12)
        throw std::invalid_argument("allocation program infeasible: K*B > 1");
    if (!(prog.budget_M > 0.0))
        throw std::invalid_argument("allocation program budget must be positive");
    if (std::abs(prog.floor_B * k - 1.0) < 1e-12)
        return Eigen::VectorXd::Constant(k, 1.0 / k);

    // The budget binds (phi has nonnegative gradient), so optimize
    // F(rho) = phi(M rho / (w . rho)) over the floored simplex. F is defined
    // on all positive vectors, which keeps the finite differences plain.
    auto objective = [&](const Eigen::VectorXd& rho) {
        double wr = prog.weights.dot(rho);
        return prog.phi(prog.budget_M * rho / wr);
    };

    std::vector<Eigen::VectorXd> starts;
    starts.push_back(Eigen::VectorXd::Constant(k, 1.0 / k));
    for (int c = 0; c < k; ++c) {
        Eigen::VectorXd corner = Eigen::VectorXd::Constant(k, prog.floor_B);
        corner[c] = 1.0 - prog.floor_B * (k - 1);
        starts.push_back(0.5 * (corner + Eigen::VectorXd::Constant(k, 1.0 / k)));
    }

    Eigen::VectorXd best;
    double best_val = -std::numeric_limits<double>::infinity();
    bool converged_any = false;

    for (const Eigen::VectorXd& start : starts) {
        Eigen::VectorXd rho = project_floored_simplex(start, prog.floor_B);
        double val = objective(rho);
        double step = 0.25;
        bool converged = false;
        for (int it = 0; it < max_iter && !converged; ++it) {
            Eigen::VectorXd grad(k);
            const double h = 1e-7;
            for (int i = 0; i < k; ++i) {
                Eigen::VectorXd up = rho, dn = rho;
                up[i] += h;
                dn[i] -= h;
                grad[i] = (objective(up) - objective(dn)) / (2.0 * h);
            }
            double gnorm = grad.norm();
            if (gnorm < 1e-13) {
                converged = true;
                break;
            }
            // stationarity of the projected-gradient mapping
            Eigen::VectorXd probe =
                project_floored_simplex(rho + 1e-4 * grad / gnorm, prog.floor_B);
            if ((probe - rho).lpNorm<Eigen::Infinity>() < tol * 1e2) {
                converged = true;
                break;
            }
            bool improved = false;
            Eigen::VectorXd cand;
            double cand_val = val;
            double s = step;
            for (int bt = 0; bt < 60; ++bt) {
                cand = project_floored_simplex(rho + s * grad / gnorm, prog.floor_B);
                cand_val = objective(cand);
                if (cand_val > val) {
                    improved = true;
                    break;
                }
                s *= 0.5;
            }
            if (!improved) {
                // no ascent left along the projection arc beyond what the
                // finite-difference noise can resolve
                converged = true;
                break;
            }
            double move = (cand - rho).lpNorm<Eigen::Infinity>();
            rho = cand;
            val = cand_val;
            step = std::min(s * 2.0, 1.0);
            if (move < tol) converged = true;
        }
        if (converged) converged_any = true;
        if (val > best_val) {
            best_val = val;
            best = rho;
        }
    }
    if (!converged_any)
        throw std::runtime_error("optimal_allocation_multiarm did not converge");
    return best;
}

}  // namespace rar
