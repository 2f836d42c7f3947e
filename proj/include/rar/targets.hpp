#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <string>

#include "rar/models.hpp"

namespace rar {

double normal_cdf(double x);

/// Lower-floor projection onto the simplex. Components below eps are raised
/// to exactly eps and the remaining mass is rescaled over the others, so the
/// result keeps the input ordering and is the identity on interior vectors.
Eigen::VectorXd clamp_simplex(Eigen::VectorXd rho, double eps);

/// A target allocation rho(theta) on the K-simplex together with its
/// Jacobian. The Jacobian is (total-param-dim x K), rows grouped by arm in
/// arm order, entry (j, k) = d rho_k / d theta_j.
class TargetAllocation {
public:
    virtual ~TargetAllocation() = default;
    virtual std::string id() const = 0;
    virtual int arms() const = 0;
    virtual Family family() const = 0;
    virtual Eigen::VectorXd rho(const Theta& theta) const = 0;
    virtual Eigen::MatrixXd gradient(const Theta& theta) const { return fd_gradient(theta); }

    /// Central finite differences; the independent check for the analytic
    /// overrides and the default for targets without one.
    Eigen::MatrixXd fd_gradient(const Theta& theta, double step = 1e-5) const;
};

// Closed-form two-arm targets (rho_1 of the pair).
double neyman_target_sd(double sd1, double sd2);
double neyman_target_binary(double p1, double p2);
double rsihr_target(double p1, double p2);
double zr_normal_target(double mu1, double mu2, double sd1, double sd2);
double bm_target(double mu1, double mu2, double sd1, double sd2, double c,
                 bool symmetric = true);
double lagrange_two_arm(double u, double v, double sd1, double sd2);

/// v_k = (1/q_k) / sum_j (1/q_j) for failure rates q in (0,1)^K.
Eigen::VectorXd urn_target(const Eigen::VectorXd& q);

// Built-in target families.
std::shared_ptr<TargetAllocation> make_urn_target(int arms);                     // bernoulli
std::shared_ptr<TargetAllocation> make_neyman_target(Family family);             // K=2
std::shared_ptr<TargetAllocation> make_rsihr_target();                           // K=2 bernoulli
std::shared_ptr<TargetAllocation> make_zr_normal_target();                       // K=2 normal
std::shared_ptr<TargetAllocation> make_bm_target(double c, bool symmetric = true);  // K=2 normal
std::shared_ptr<TargetAllocation> make_fixed_target(const Eigen::VectorXd& rho, Family family);

/// Information lower bound for the asymptotic variance of sample allocation
/// proportions targeting rho: grad' diag(I_k^{-1}/rho_k) grad, a PSD KxK
/// matrix. For K=2 the (0,0) entry is the scalar bound for arm 1.
Eigen::MatrixXd sigma_lb(const TargetAllocation& target, const Theta& theta);

/// Constrained allocation program: maximize a concave phi with nonnegative
/// gradient over { sum_j w_j m_j <= M, m_k / sum_j m_j >= B }, reported as
/// proportions. Solved by projected ascent on the floored simplex.
struct AllocationProgram {
    std::function<double(const Eigen::VectorXd&)> phi;
    Eigen::VectorXd weights;
    double floor_B = 0.0;
    double budget_M = 1.0;
};

Eigen::VectorXd optimal_allocation_multiarm(const AllocationProgram& prog,
                                            int max_iter = 20000, double tol = 1e-11);

}  // namespace rar
