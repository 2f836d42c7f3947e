#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "oracles.hpp"
#include "rar/targets.hpp"

using namespace rar;

namespace {
Theta binary_theta(std::initializer_list<double> ps) {
    Theta t;
    for (double p : ps) t.push_back(Eigen::VectorXd::Constant(1, p));
    return t;
}

Theta normal_theta(std::initializer_list<std::pair<double, double>> params) {
    Theta t;
    for (auto [mu, s2] : params) {
        Eigen::VectorXd v(2);
        v << mu, s2;
        t.push_back(v);
    }
    return t;
}
}  // namespace

TEST_SUITE_BEGIN("targets");

TEST_CASE("urn target closed forms") {
    Eigen::VectorXd q2(2);
    q2 << 0.5, 0.5;
    CHECK(urn_target(q2)[0] == doctest::Approx(0.5));

    q2 << 0.3, 0.6;
    Eigen::VectorXd v = urn_target(q2);
    CHECK(v[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(v[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    Eigen::VectorXd q3(3);
    q3 << 0.2, 0.4, 0.8;
    Eigen::VectorXd v3 = urn_target(q3);
    CHECK(v3[0] == doctest::Approx(4.0 / 7.0).epsilon(1e-14));
    CHECK(v3[1] == doctest::Approx(2.0 / 7.0).epsilon(1e-14));
    CHECK(v3[2] == doctest::Approx(1.0 / 7.0).epsilon(1e-14));

    // decreasing in own failure rate
    q2 << 0.3, 0.6;
    double base = urn_target(q2)[0];
    q2 << 0.4, 0.6;
    CHECK(urn_target(q2)[0] < base);

    q2 << 0.0, 0.5;
    CHECK_THROWS_AS(urn_target(q2), std::invalid_argument);
    q2 << 1.0, 0.5;
    CHECK_THROWS_AS(urn_target(q2), std::invalid_argument);
}

TEST_CASE("two-arm target closed forms") {
    CHECK(neyman_target_sd(1.0, 1.0) == doctest::Approx(0.5));
    CHECK(neyman_target_sd(2.0, 1.0) == doctest::Approx(2.0 / 3.0));
    CHECK(neyman_target_binary(0.8, 0.5) == doctest::Approx(4.0 / 9.0));

    CHECK(rsihr_target(0.25, 0.25) == doctest::Approx(0.5));
    CHECK(rsihr_target(0.81, 0.36) == doctest::Approx(0.6));
    CHECK(rsihr_target(0.5, 0.36) > rsihr_target(0.4, 0.36));
    CHECK_THROWS_AS(rsihr_target(0.0, 0.5), std::invalid_argument);

    CHECK(zr_normal_target(1.0, 1.0, 1.0, 1.0) == doctest::Approx(0.5));
    CHECK(zr_normal_target(4.0, 1.0, 1.0, 1.0) == doctest::Approx(1.0 / 3.0));
    CHECK(zr_normal_target(1.0, 1.0, 2.0, 1.0) == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(zr_normal_target(-1.0, 1.0, 1.0, 1.0), std::invalid_argument);

    CHECK(lagrange_two_arm(1.0, 1.0, 2.0, 1.0) == doctest::Approx(neyman_target_sd(2.0, 1.0)));
    CHECK(lagrange_two_arm(3.0, 3.0, 2.0, 1.0) == doctest::Approx(neyman_target_sd(2.0, 1.0)));
    CHECK(lagrange_two_arm(4.0, 1.0, 1.0, 1.0) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("bm target: symmetry, limits, numeric value") {
    CHECK(bm_target(1.0, 1.0, 1.0, 1.0, 0.3) == doctest::Approx(0.5));
    CHECK(bm_target(1.0, 2.0, 1.0, 1.0, -100.0) == doctest::Approx(0.5).epsilon(1e-9));

    // direct numeric evaluation of the symmetric form at mu=(1,0), sd=(1,1), c=0
    double expected = std::sqrt(normal_cdf(0.0)) /
                      (std::sqrt(normal_cdf(0.0)) + std::sqrt(normal_cdf(1.0)));
    CHECK(bm_target(1.0, 0.0, 1.0, 1.0, 0.0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(bm_target(1.0, 0.0, 1.0, 1.0, 0.0) == doctest::Approx(0.4353148).epsilon(1e-5));

    // swap symmetry of the default form
    double r1 = bm_target(1.0, 0.2, 1.5, 0.7, 0.1);
    double r2 = bm_target(0.2, 1.0, 0.7, 1.5, 0.1);
    CHECK(r1 == doctest::Approx(1.0 - r2).epsilon(1e-12));

    // the as-printed form repeats sd1, which cancels it out of the ratio
    // entirely; it disagrees with the sd-weighted form whenever sd1 != sd2
    double a1 = bm_target(1.0, 0.2, 1.5, 0.7, 0.1, false);
    CHECK(std::abs(a1 - r1) > 1e-3);
    double phi1 = std::sqrt(normal_cdf((1.0 - 0.1) / 1.5));
    double phi2 = std::sqrt(normal_cdf((0.2 - 0.1) / 0.7));
    CHECK(a1 == doctest::Approx(phi2 / (phi2 + phi1)).epsilon(1e-12));
}

TEST_CASE("clamp_simplex floors and preserves ordering") {
    Eigen::VectorXd interior(2);
    interior << 2.0 / 3.0, 1.0 / 3.0;
    Eigen::VectorXd out = clamp_simplex(interior, 0.01);
    CHECK(out[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(out[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    Eigen::VectorXd low(3);
    low << 0.001, 0.001, 0.998;
    out = clamp_simplex(low, 0.01);
    CHECK(out.sum() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(out.minCoeff() >= 0.01 - 1e-15);
    CHECK(out[2] <= 1.0 - 0.01 + 1e-15);

    Eigen::VectorXd mixed(4);
    mixed << 0.002, 0.03, 0.2, 0.768;
    out = clamp_simplex(mixed, 0.01);
    CHECK(out.sum() == doctest::Approx(1.0).epsilon(1e-14));
    for (int i = 0; i + 1 < 4; ++i) CHECK(out[i] <= out[i + 1] + 1e-15);
    CHECK(out.minCoeff() >= 0.01 - 1e-15);
}

TEST_CASE("analytic gradients match central finite differences") {
    auto check_target = [](const TargetAllocation& t, const Theta& theta) {
        Eigen::MatrixXd analytic = t.gradient(theta);
        Eigen::MatrixXd fd = t.fd_gradient(theta);
        double scale = std::max(1e-8, fd.cwiseAbs().maxCoeff());
        CHECK((analytic - fd).cwiseAbs().maxCoeff() / scale < 1e-5);
    };

    auto urn2 = make_urn_target(2);
    auto urn3 = make_urn_target(3);
    auto neyb = make_neyman_target(Family::bernoulli);
    auto neyn = make_neyman_target(Family::normal);
    auto rsihr = make_rsihr_target();
    auto zr = make_zr_normal_target();

    const double grid[] = {0.15, 0.3, 0.45, 0.6, 0.75};
    for (double p1 : grid)
        for (double p2 : grid) {
            Theta t2 = binary_theta({p1, p2});
            check_target(*urn2, t2);
            check_target(*neyb, t2);
            check_target(*rsihr, t2);
            Theta t3 = binary_theta({p1, p2, 0.5});
            check_target(*urn3, t3);
            Theta tn = normal_theta({{0.5 + p1, 0.5 + p2}, {0.5 + p2, 1.5 - p1}});
            check_target(*neyn, tn);
            check_target(*zr, tn);
        }
}

TEST_CASE("sigma_lb closed forms for the binary targets") {
    auto urn = make_urn_target(2);
    auto neyman = make_neyman_target(Family::bernoulli);
    auto rsihr = make_rsihr_target();

    // urn target: q1 q2 (p1+p2) / (q1+q2)^3
    for (double p1 : {0.3, 0.5, 0.7})
        for (double p2 : {0.2, 0.4, 0.6}) {
            Theta t = binary_theta({p1, p2});
            double q1 = 1 - p1, q2 = 1 - p2, s = q1 + q2;
            double expect = q1 * q2 * (p1 + p2) / (s * s * s);
            CHECK(sigma_lb(*urn, t)(0, 0) == doctest::Approx(expect).epsilon(1e-9));
        }

    // Neyman at p1 = p2 = 1/2: the (1-2p) factors vanish
    CHECK(sigma_lb(*neyman, binary_theta({0.5, 0.5}))(0, 0) ==
          doctest::Approx(0.0).epsilon(1e-12));

    // RSIHR at (0.7, 0.4): [p2 q1/sqrt(p1) + p1 q2/sqrt(p2)] / (4 (sqrt(p1)+sqrt(p2))^3)
    {
        double p1 = 0.7, p2 = 0.4, q1 = 0.3, q2 = 0.6;
        double s = std::sqrt(p1) + std::sqrt(p2);
        double expect =
            (p2 * q1 / std::sqrt(p1) + p1 * q2 / std::sqrt(p2)) / (4.0 * s * s * s);
        CHECK(sigma_lb(*rsihr, binary_theta({p1, p2}))(0, 0) ==
              doctest::Approx(expect).epsilon(1e-9));
        // and the Neyman binary closed form at the same theta
        double a = std::sqrt(p1 * q1), b = std::sqrt(p2 * q2), sn = a + b;
        double expect_ney = (p2 * q2 * (1 - 2 * p1) * (1 - 2 * p1) / a +
                             p1 * q1 * (1 - 2 * p2) * (1 - 2 * p2) / b) /
                            (4.0 * sn * sn * sn);
        CHECK(sigma_lb(*neyman, binary_theta({p1, p2}))(0, 0) ==
              doctest::Approx(expect_ney).epsilon(1e-9));
    }
}

TEST_CASE("sigma_lb is positive semidefinite on a grid") {
    auto urn3 = make_urn_target(3);
    auto rsihr = make_rsihr_target();
    for (double p1 : {0.1, 0.3, 0.5, 0.7, 0.9})
        for (double p2 : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            Eigen::MatrixXd lb2 = sigma_lb(*rsihr, binary_theta({p1, p2}));
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(lb2);
            CHECK(es2.eigenvalues().minCoeff() >= -1e-12);
            Eigen::MatrixXd lb3 = sigma_lb(*urn3, binary_theta({p1, p2, 0.42}));
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es3(lb3);
            CHECK(es3.eigenvalues().minCoeff() >= -1e-12);
        }
}

TEST_CASE("allocation program: singleton feasible set") {
    AllocationProgram prog;
    prog.phi = [](const Eigen::VectorXd& m) { return m.prod(); };
    prog.weights = Eigen::VectorXd::Ones(3);
    prog.floor_B = 1.0 / 3.0;
    prog.budget_M = 10.0;
    Eigen::VectorXd rho = optimal_allocation_multiarm(prog);
    for (int i = 0; i < 3; ++i) CHECK(rho[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("allocation program recovers Neyman proportions") {
    double s1 = 1.7, s2 = 0.6;
    AllocationProgram prog;
    prog.phi = [&](const Eigen::VectorXd& m) {
        return -(s1 * s1 / m[0] + s2 * s2 / m[1]);
    };
    prog.weights = Eigen::VectorXd::Ones(2);
    prog.floor_B = 0.0;
    prog.budget_M = 100.0;
    Eigen::VectorXd rho = optimal_allocation_multiarm(prog);
    CHECK(rho[0] == doctest::Approx(lagrange_two_arm(1.0, 1.0, s1, s2)).epsilon(1e-5));
}

TEST_CASE("allocation program matches the grid-search oracle at K=3") {
    Eigen::Vector3d p(0.75, 0.5, 0.3);
    AllocationProgram prog;
    prog.phi = [&](const Eigen::VectorXd& m) {
        double s = 0.0;
        for (int i = 0; i < 3; ++i) s += p[i] * (1.0 - p[i]) / m[i];
        return -s;
    };
    prog.weights = Eigen::VectorXd::Ones(3);
    prog.floor_B = 0.1;
    prog.budget_M = 50.0;
    Eigen::VectorXd rho = optimal_allocation_multiarm(prog);
    // the 0.002-step lattice localizes the optimum to about 1.2e-3 here, so the
    // 1e-3 componentwise comparison needs the finer grid; the coarse grid still
    // bounds the achieved objective value
    Eigen::VectorXd fine = oracle::grid_search_allocation(prog.phi, prog.weights,
                                                          prog.floor_B, prog.budget_M, 0.001);
    CHECK((rho - fine).lpNorm<Eigen::Infinity>() <= 1.01e-3);
    Eigen::VectorXd coarse = oracle::grid_search_allocation(
        prog.phi, prog.weights, prog.floor_B, prog.budget_M, 0.002);
    auto value = [&](const Eigen::VectorXd& r) {
        return prog.phi(prog.budget_M * r / prog.weights.dot(r));
    };
    CHECK(value(rho) >= value(coarse) - 1e-12);
}

TEST_CASE("allocation program rejects infeasible floors") {
    AllocationProgram prog;
    prog.phi = [](const Eigen::VectorXd& m) { return m.sum(); };
    prog.weights = Eigen::VectorXd::Ones(2);
    prog.floor_B = 0.6;
    prog.budget_M = 1.0;
    CHECK_THROWS_AS(optimal_allocation_multiarm(prog), std::invalid_argument);
}

TEST_SUITE_END();
